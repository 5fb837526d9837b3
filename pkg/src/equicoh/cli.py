"""Command-line front end: schema-validated task dispatch, named example
runners with computed-versus-predicted tables, and input validation with
cheap mathematical gates.

Exit codes: 0 success; 2 schema violation (the report carries a pointer to
the offending field); 3 mathematical validation failure (the report echoes
the witness produced by the owning module).  Default JSON output contains
no timestamps and is byte-identical for byte-identical input; timing is
only added behind ``--timing``.  Every numeric cell in a result table is
produced by a library operation, never by CLI-side arithmetic."""

from __future__ import annotations

import argparse
import ast
import hashlib
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional, Sequence

from . import gdiff as gd
from . import lie
from . import poisson as po
from .core import cohomology
from .poly import PolyForm, PolyMultivector


KINDS = ("lie-cohomology", "gdiff-check", "equivariant", "weil-check",
         "poisson-cohomology", "equivariant-poisson", "momentum-ss",
         "example")

EXAMPLES = ("poiss1", "poiss2", "poiss3", "poiss4", "torus", "coh-inv",
            "su2-dual", "weil")


class SchemaError(Exception):
    """Input shape violation; `field` points at the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class MathError(Exception):
    """Mathematical gate failure; `witness` echoes the module's report."""

    def __init__(self, witness: str):
        super().__init__(witness)
        self.witness = witness


class UnknownExample(Exception):
    pass


# ---------------------------------------------------------------------------
# Fractions, polynomials, matrices


def _parse_frac(value, field: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(field, "expected an integer or a 'num/den' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(field, f"not a rational number: {exc}")


def _expect(cond: bool, field: str, message: str):
    if not cond:
        raise SchemaError(field, message)


def _expect_int(value, field: str, low: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, "expected an integer")
    if low is not None and value < low:
        raise SchemaError(field, f"expected an integer >= {low}")
    return value


def _parse_term(data, ambient: int, field: str):
    _expect(isinstance(data, dict), field, "expected a term object")
    unknown = set(data) - {"exponents", "coeff"}
    _expect(not unknown, field, f"unknown keys {sorted(unknown)}")
    exps = data.get("exponents")
    _expect(isinstance(exps, list) and len(exps) == ambient,
            f"{field}.exponents", f"expected a list of {ambient} integers")
    for t, e in enumerate(exps):
        _expect_int(e, f"{field}.exponents[{t}]", low=0)
    coeff = _parse_frac(data.get("coeff"), f"{field}.coeff")
    return tuple(exps), coeff


def _parse_poly(data, ambient: int, field: str) -> PolyMultivector:
    _expect(isinstance(data, list), field, "expected a list of terms")
    acc = {}
    for t, term in enumerate(data):
        exps, coeff = _parse_term(term, ambient, f"{field}[{t}]")
        key = ((), exps)
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return PolyMultivector(ambient, 0, acc)


def _frac_json(value):
    if isinstance(value, Fraction):
        return str(value)
    raise TypeError(f"not JSON serializable: {value!r}")


def _mat_json(matrix) -> list:
    return [[str(Fraction(x)) for x in row] for row in matrix]


def _parse_mat(data, rows: int, cols: int, field: str) -> list:
    _expect(isinstance(data, list) and len(data) == rows, field,
            f"expected a {rows} x {cols} matrix")
    out = []
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and len(row) == cols,
                f"{field}[{i}]", f"expected {cols} entries")
        out.append([_parse_frac(x, f"{field}[{i}][{j}]")
                    for j, x in enumerate(row)])
    return out


# ---------------------------------------------------------------------------
# Lie algebras


def parse_algebra(data, field: str = "algebra") -> lie.LieAlgebra:
    _expect(isinstance(data, dict), field, "expected an object")
    unknown = set(data) - {"dim", "brackets", "compact_type", "name"}
    _expect(not unknown, field, f"unknown keys {sorted(unknown)}")
    dim = _expect_int(data.get("dim"), f"{field}.dim", low=0)
    brk = data.get("brackets", [])
    _expect(isinstance(brk, list), f"{field}.brackets", "expected a list")
    entries = []
    for t, item in enumerate(brk):
        here = f"{field}.brackets[{t}]"
        _expect(isinstance(item, list) and len(item) == 3, here,
                "expected [a, b, [[k, coeff], ...]]")
        a = _expect_int(item[0], f"{here}[0]", low=0)
        b = _expect_int(item[1], f"{here}[1]", low=0)
        _expect(a < dim and b < dim, here, "generator index out of range")
        _expect(isinstance(item[2], list), f"{here}[2]", "expected a list")
        terms = []
        for s, term in enumerate(item[2]):
            _expect(isinstance(term, list) and len(term) == 2,
                    f"{here}[2][{s}]", "expected [k, coeff]")
            k = _expect_int(term[0], f"{here}[2][{s}][0]", low=0)
            _expect(k < dim, f"{here}[2][{s}][0]", "index out of range")
            terms.append([k, _parse_frac(term[1], f"{here}[2][{s}][1]")])
        entries.append([a, b, terms])
    compact = data.get("compact_type", False)
    _expect(isinstance(compact, bool), f"{field}.compact_type",
            "expected a boolean")
    name = data.get("name")
    if name is not None:
        _expect(isinstance(name, str), f"{field}.name", "expected a string")
    try:
        return lie.build_lie_algebra(dim, entries, compact_type=compact,
                                     name=name or "")
    except (lie.JacobiViolation, lie.AntisymmetryViolation,
            ValueError) as exc:
        raise MathError(f"bracket table rejected: {exc}")


def algebra_to_json(g: lie.LieAlgebra) -> dict:
    brackets = []
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            terms = [[k, str(Fraction(c))] for k, c in enumerate(g.c[a][b])
                     if c]
            if terms:
                brackets.append([a, b, terms])
    out = {"dim": g.dim, "brackets": brackets,
           "compact_type": bool(g.compact_type)}
    if g.name:
        out["name"] = g.name
    return out


# ---------------------------------------------------------------------------
# Poisson payloads


def parse_poisson(data, field: str = "payload") -> dict:
    """Returns {"structure", "maxdeg", "action_algebra", "generators",
    "mu", "submersive"} after full schema validation."""
    _expect(isinstance(data, dict), field, "expected an object")
    unknown = set(data) - {"ambient", "maxdeg", "pi", "regime", "action",
                           "mu", "submersive"}
    _expect(not unknown, field, f"unknown keys {sorted(unknown)}")
    ambient = _expect_int(data.get("ambient"), f"{field}.ambient", low=1)
    maxdeg = None
    if "maxdeg" in data:
        maxdeg = _expect_int(data["maxdeg"], f"{field}.maxdeg", low=0)
    entries = data.get("pi")
    _expect(isinstance(entries, list), f"{field}.pi",
            "expected a list of [[i, j], term] entries")
    acc = {}
    for t, item in enumerate(entries):
        here = f"{field}.pi[{t}]"
        _expect(isinstance(item, list) and len(item) == 2, here,
                "expected [[i, j], term]")
        pair = item[0]
        _expect(isinstance(pair, list) and len(pair) == 2, f"{here}[0]",
                "expected an index pair [i, j]")
        i = _expect_int(pair[0], f"{here}[0][0]", low=0)
        j = _expect_int(pair[1], f"{here}[0][1]", low=0)
        _expect(i < ambient and j < ambient, f"{here}[0]",
                "coordinate index out of range")
        if i == j:
            raise MathError(
                f"antisymmetry violated at pi[{t}]: repeated index {i}")
        exps, coeff = _parse_term(item[1], ambient, f"{here}[1]")
        key, sign = (((i, j), exps), 1) if i < j else (((j, i), exps), -1)
        acc[key] = acc.get(key, Fraction(0)) + sign * coeff
    bivector = PolyMultivector(ambient, 2, acc)
    p = po.poisson_structure(bivector)
    declared = data.get("regime")
    if declared is not None:
        _expect(isinstance(declared, str), f"{field}.regime",
                "expected a string")
        _expect(declared == p.regime, f"{field}.regime",
                f"declared '{declared}' but the coefficients are "
                f"'{p.regime}'")
    action = data.get("action")
    algebra = generators = None
    if action is not None:
        _expect(isinstance(action, dict), f"{field}.action",
                "expected an object")
        unknown = set(action) - {"algebra", "generators"}
        _expect(not unknown, f"{field}.action",
                f"unknown keys {sorted(unknown)}")
        algebra = parse_algebra(action.get("algebra"),
                                f"{field}.action.algebra")
        generators = action.get("generators")
        if generators is not None:
            _expect(isinstance(generators, list), f"{field}.action.generators",
                    "expected a list of generator indices")
            for s, k in enumerate(generators):
                k = _expect_int(k, f"{field}.action.generators[{s}]", low=0)
                _expect(k < algebra.dim, f"{field}.action.generators[{s}]",
                        "generator index out of range")
    mu = None
    if data.get("mu") is not None:
        _expect(isinstance(data["mu"], list), f"{field}.mu",
                "expected a list of polynomials")
        mu = [_parse_poly(item, ambient, f"{field}.mu[{t}]")
              for t, item in enumerate(data["mu"])]
        if algebra is not None:
            _expect(len(mu) == algebra.dim, f"{field}.mu",
                    f"expected {algebra.dim} components, one per generator")
    submersive = data.get("submersive", False)
    _expect(isinstance(submersive, bool), f"{field}.submersive",
            "expected a boolean")
    return {"structure": p, "maxdeg": maxdeg, "action_algebra": algebra,
            "generators": generators, "mu": mu, "submersive": submersive}


def _require_certified_cli(p: po.PoissonStructure):
    if not p.certified:
        raise MathError("the bivector does not self-commute; defect "
                        f"{p.jacobiator!r}")


def momentum_from_payload(parsed: dict) -> po.MomentumData:
    if parsed["action_algebra"] is None:
        raise SchemaError("payload.action", "an action block is required")
    if parsed["mu"] is None:
        raise SchemaError("payload.mu", "momentum components are required")
    try:
        return po.momentum_setup(parsed["structure"],
                                 parsed["action_algebra"],
                                 mu=parsed["mu"],
                                 submersive=parsed["submersive"])
    except (po.MomentMismatch, po.NotAntiHomomorphism, po.DDeltaViolation,
            po.PoissonActionViolation) as exc:
        raise MathError(str(exc))


# ---------------------------------------------------------------------------
# G-differential payloads


def parse_gdiff(data, field: str = "payload",
                check: bool = True) -> gd.GDiffComplex:
    from .core import CochainComplex, GradedSpace, LinearMap

    _expect(isinstance(data, dict), field, "expected an object")
    unknown = set(data) - {"algebra", "dims", "d", "contractions", "lie_ops",
                           "product", "unit"}
    _expect(not unknown, field, f"unknown keys {sorted(unknown)}")
    algebra = parse_algebra(data.get("algebra"), f"{field}.algebra")
    dims_raw = data.get("dims")
    _expect(isinstance(dims_raw, dict), f"{field}.dims", "expected an object")
    dims = {}
    for key, value in dims_raw.items():
        try:
            deg = int(key)
        except ValueError:
            raise SchemaError(f"{field}.dims.{key}", "degree must be an int")
        dims[deg] = _expect_int(value, f"{field}.dims.{key}", low=0)
    space = GradedSpace.from_dims(dims)

    def blocks_of(raw, shift: int, here: str) -> LinearMap:
        _expect(isinstance(raw, dict), here, "expected an object of blocks")
        blocks = {}
        for key, mat in raw.items():
            try:
                deg = int(key)
            except ValueError:
                raise SchemaError(f"{here}.{key}", "degree must be an int")
            rows, cols = dims.get(deg + shift, 0), dims.get(deg, 0)
            blocks[deg] = _parse_mat(mat, rows, cols, f"{here}.{key}")
        return LinearMap.from_blocks(space, space, shift, blocks)

    d = blocks_of(data.get("d", {}), 1, f"{field}.d")
    try:
        complex_ = CochainComplex.build(space, d)
    except Exception as exc:
        raise MathError(f"differential does not square to zero: {exc}")
    raw_i = data.get("contractions", [])
    raw_l = data.get("lie_ops", [])
    _expect(isinstance(raw_i, list) and len(raw_i) == algebra.dim,
            f"{field}.contractions",
            f"expected {algebra.dim} generator blocks")
    _expect(isinstance(raw_l, list) and len(raw_l) == algebra.dim,
            f"{field}.lie_ops", f"expected {algebra.dim} generator blocks")
    contractions = [blocks_of(raw, -1, f"{field}.contractions[{t}]")
                    for t, raw in enumerate(raw_i)]
    lie_ops = [blocks_of(raw, 0, f"{field}.lie_ops[{t}]")
               for t, raw in enumerate(raw_l)]
    product = None
    if data.get("product") is not None:
        raw = data["product"]
        _expect(isinstance(raw, dict) and isinstance(raw.get("table"), dict),
                f"{field}.product", "expected {'table': {...}}")
        table = {}
        for dkey, pairs in raw["table"].items():
            da, db = (int(x) for x in dkey.split(","))
            inner = {}
            for pkey, terms in pairs.items():
                ia, ib = (int(x) for x in pkey.split(","))
                inner[(ia, ib)] = tuple(
                    (int(k), _parse_frac(c, f"{field}.product.table"))
                    for k, c in terms)
            table[(da, db)] = inner
        product = gd.Product(table)
    unit = None
    if data.get("unit") is not None:
        raw = data["unit"]
        unit = tuple(_parse_frac(x, f"{field}.unit[{t}]")
                     for t, x in enumerate(raw))
    try:
        return gd.build_gdiff(algebra, complex_, contractions, lie_ops,
                              product=product, unit=unit, check=check)
    except gd.AxiomFailure as exc:
        raise MathError(f"axiom check failed: {exc.args[0].to_json()}")


def gdiff_to_json(c: gd.GDiffComplex) -> dict:
    space = c.complex.space
    degs = sorted(space.degrees())
    dims = {str(n): space.dim(n) for n in degs}

    def blocks_json(op, shift):
        out = {}
        for n in degs:
            if space.dim(n) and space.dim(n + shift):
                out[str(n)] = _mat_json(op.block(n))
        return out

    data = {"algebra": algebra_to_json(c.algebra),
            "dims": dims,
            "d": blocks_json(c.d, 1),
            "contractions": [blocks_json(op, -1) for op in c.contractions],
            "lie_ops": [blocks_json(op, 0) for op in c.lie_ops]}
    if c.product is not None:
        table = {}
        for (da, db), pairs in c.product.table.items():
            inner = {}
            for (ia, ib), terms in pairs.items():
                inner[f"{ia},{ib}"] = [[k, str(Fraction(v))]
                                       for k, v in terms]
            table[f"{da},{db}"] = inner
        data["product"] = {"table": table}
    if c.unit is not None:
        data["unit"] = [str(Fraction(x)) for x in c.unit]
    return data


# ---------------------------------------------------------------------------
# Bundled inputs


def bundled_names() -> list:
    root = resources.files("equicoh") / "data"
    return sorted(entry.name for entry in root.iterdir()
                  if entry.name.endswith(".json"))


def bundled_text(name: str) -> str:
    path = resources.files("equicoh") / "data" / name
    if not path.is_file():
        raise SchemaError("file", f"no bundled input named {name!r}")
    return path.read_text()


def bundled_momentum_fixtures() -> dict:
    """Every bundled input that assembles to momentum data, by file name."""
    out = {}
    for name in bundled_names():
        try:
            data = json.loads(bundled_text(name))
        except ValueError:
            continue
        if not isinstance(data, dict) or "pi" not in data:
            continue
        if data.get("action") is None or data.get("mu") is None:
            continue
        out[name] = momentum_from_payload(parse_poisson(data))
    return out


# ---------------------------------------------------------------------------
# Expression parameters


def fprime_function(expr: str) -> Callable:
    """Exact evaluator for a univariate polynomial expression in t, built
    from integer literals, + - * / and non-negative integer powers."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise SchemaError("fprime", f"cannot parse {expr!r}: {exc}")

    def ev(node, t: Fraction) -> Fraction:
        if isinstance(node, ast.Expression):
            return ev(node.body, t)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id == "t":
            return t
        if isinstance(node, ast.UnaryOp) and isinstance(
                node.op, (ast.UAdd, ast.USub)):
            inner = ev(node.operand, t)
            return inner if isinstance(node.op, ast.UAdd) else -inner
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left, t), ev(node.right, t)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right == 0:
                    raise SchemaError("fprime", "division by zero")
                return left / right
            if isinstance(node.op, ast.Pow):
                if right.denominator != 1 or right < 0:
                    raise SchemaError(
                        "fprime", "powers must be non-negative integers")
                return left ** int(right)
        raise SchemaError("fprime",
                          f"unsupported syntax near {ast.dump(node)[:60]}")

    def fn(t) -> Fraction:
        return ev(tree, Fraction(t))

    fn(0)  # validate eagerly
    return fn


def _parse_rational_list(text: str, field: str) -> list:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            raise SchemaError(field, "empty entry in the list")
        out.append(_parse_frac(part, field))
    return out


def _parse_int_range(text: str, field: str) -> list:
    text = str(text).strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise SchemaError(field, f"cannot parse range {text!r}")
        if hi < lo:
            raise SchemaError(field, "range upper end below lower end")
        return list(range(lo, hi + 1))
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise SchemaError(field, f"cannot parse {text!r}")


# ---------------------------------------------------------------------------
# Example runners (computed and predicted tables, side by side)


def _su2_momentum() -> po.MomentumData:
    g = lie.su2()
    p = po.linear_poisson(g)
    mu = [po.function(3, {tuple(1 if t == j else 0 for t in range(3)):
                          Fraction(1)}) for j in range(3)]
    return po.momentum_setup(p, g, mu=mu, submersive=True)


def _rotation_momentum(planes: int) -> po.MomentumData:
    p = po.symplectic_poisson(planes)
    n = 2 * planes
    mu = []
    for t in range(planes):
        terms = {}
        for c in (2 * t, 2 * t + 1):
            e = [0] * n
            e[c] = 2
            terms[tuple(e)] = Fraction(-1, 2)
        mu.append(po.function(n, terms))
    return po.momentum_setup(p, lie.abelian(planes), mu=mu)


def _example_poiss1(params: dict) -> dict:
    slices = _parse_int_range(params.get("slices", "0..4"), "slices")
    sym_cap = int(params.get("sym_cap", 2))
    md = _su2_momentum()
    computed, predicted = [], []
    for s in slices:
        rep = po.equivariant_poisson_cohomology(md, sym_cap=sym_cap,
                                                slice_degree=s)
        dims = rep.cohomology.dims_list()
        computed.append({"slice": s, "dims": dims,
                         "h0": rep.cohomology.dim(0),
                         "higher_vanish": all(x == 0 for x in dims[1:])})
        inv = lie.invariants(lie.sym_power_rep(md.algebra, s)).dim(0)
        predicted.append({"slice": s, "h0": inv, "higher": 0})
    agrees = all(c["h0"] == p["h0"] and c["higher_vanish"]
                 for c, p in zip(computed, predicted))
    return {"computed": computed, "predicted": predicted, "agrees": agrees}


def _product_line_example(params: dict, fprime_default: str) -> dict:
    roots = _parse_rational_list(params.get("roots", "0,1,2,3,4"), "roots")
    fn = fprime_function(str(params.get("fprime", fprime_default)))
    values = [fn(r) for r in roots]
    try:
        model = po.build_product_line_model(roots, values)
    except po.DuplicateRoots as exc:
        raise MathError(str(exc))
    report = po.product_line_report(model)
    m = len(roots)
    rank = sum(1 for v in values if v != 0)
    predicted = {"final_dims": [m, m - rank, m - rank, m],
                 "page_matrix": _mat_json(
                     [[values[i] if i == j else 0 for j in range(m)]
                      for i in range(m)])}
    page = report["page_differential"]
    computed = {"final_dims": report["final_dims"],
                "direct_dims": report["direct_dims"],
                "page_differential": (
                    None if page is None
                    else {"page": page["page"],
                          "matrix": _mat_json(page["matrix"])})}
    agrees = (computed["final_dims"] == predicted["final_dims"]
              and computed["direct_dims"] == predicted["final_dims"]
              and (rank == 0 or (page is not None
                                 and page_matrix_equal(page["matrix"],
                                                       values))))
    return {"roots": [str(r) for r in roots],
            "fprime_values": [str(v) for v in values],
            "computed": computed, "predicted": predicted, "agrees": agrees}


def page_matrix_equal(matrix, values) -> bool:
    m = len(values)
    return matrix == [[values[i] if i == j else 0 for j in range(m)]
                      for i in range(m)]


def _example_poiss2(params: dict) -> dict:
    params = dict(params)
    params.setdefault("fprime", "1")
    return _product_line_example(params, "1")


def _example_poiss3(params: dict) -> dict:
    return _product_line_example(params, "t*(t-1)")


def _example_poiss4(params: dict) -> dict:
    params = dict(params)
    params.setdefault("fprime", "0")
    return _product_line_example(params, "0")


def _example_torus(params: dict) -> dict:
    planes = int(params.get("planes", 1))
    if planes < 1:
        raise SchemaError("planes", "expected a positive integer")
    slices = _parse_int_range(params.get("slices", "0..3"), "slices")
    sym_cap = int(params.get("sym_cap", 2))
    md = _rotation_momentum(planes)
    rows = []
    for s in slices:
        rep = po.sharp_comparison(md, slice_degree=s, sym_cap=sym_cap)
        rows.append({
            "slice": s,
            "d_sign": rep["d_sign"],
            "d_intertwines": rep["d_intertwines"],
            "contraction_intertwines": rep["contraction_intertwines"],
            "invertible": rep["invertible"],
            "tangent_matches_basic_image": rep["tangent_matches_basic_image"],
            "computed": rep["equivariant_multivector_dims"],
            "predicted": rep["equivariant_form_dims"],
            "agrees": rep["equivariant_dims_agree"],
        })
    return {"planes": planes, "per_slice": rows,
            "agrees": all(r["agrees"] and r["invertible"]
                          and r["d_intertwines"] for r in rows)}


def _example_coh_inv(params: dict) -> dict:
    g = lie.su2()
    p = po.linear_poisson(g)
    h = po.poisson_cohomology(p, truncation=0, slice_degree=0)
    computed = h.slices[0][:g.dim + 1]
    hg = lie.lie_cohomology(g)
    predicted = [hg.dims.get(n, 0) for n in range(g.dim + 1)]
    return {"computed": computed, "predicted": predicted,
            "agrees": computed == predicted}


def _example_su2_dual(params: dict) -> dict:
    max_degree = int(params.get("max_degree", 4))
    p = po.linear_poisson(lie.su2())
    h = po.poisson_cohomology(p, truncation=max_degree)
    model = po.poisson_complex(p, slice_degree=2)
    return {"computed": {"dims": h.dims_list(3),
                         "slices": {str(k): v for k, v in h.slices.items()},
                         "slice2_complex_dims": [model.space.dim(q)
                                                 for q in range(4)]},
            "predicted": {str(k): v for k, v in h.predicted.items()},
            "agrees": bool(h.matches)}


def _example_weil(params: dict) -> dict:
    sym_cap = int(params.get("sym_cap", 2))
    out = {}
    agrees = True
    for g in (lie.su2(), lie.abelian(2)):
        w = gd.weil_algebra(g, sym_cap)
        h = cohomology(w.gdiff.complex)
        acyclic_band = [h.dim(n) for n in range(sym_cap + 1)]
        basic, _ = gd.basic_subcomplex(w.gdiff)
        hb = cohomology(basic)
        top = 2 * sym_cap
        basic_dims = [hb.dim(n) for n in range(top + 1)]
        predicted_acyclic = [1] + [0] * sym_cap
        predicted_basic = [
            lie.invariants(lie.sym_power_rep(g, n // 2)).dim(0)
            if n % 2 == 0 else 0 for n in range(top + 1)]
        key = g.name or f"dim{g.dim}"
        ok = (acyclic_band == predicted_acyclic
              and basic_dims == predicted_basic)
        agrees = agrees and ok
        out[key] = {"computed": {"cohomology_band": acyclic_band,
                                 "basic_dims": basic_dims},
                    "predicted": {"cohomology_band": predicted_acyclic,
                                  "basic_dims": predicted_basic},
                    "agrees": ok}
    return {"sym_cap": sym_cap, "algebras": out, "agrees": agrees}


_EXAMPLE_RUNNERS = {
    "poiss1": _example_poiss1,
    "poiss2": _example_poiss2,
    "poiss3": _example_poiss3,
    "poiss4": _example_poiss4,
    "torus": _example_torus,
    "coh-inv": _example_coh_inv,
    "su2-dual": _example_su2_dual,
    "weil": _example_weil,
}


def run_example(name: str, parameters: dict) -> dict:
    if name not in _EXAMPLE_RUNNERS:
        raise UnknownExample(
            f"unknown example {name!r}; available: {', '.join(EXAMPLES)}")
    return _EXAMPLE_RUNNERS[name](parameters)


# ---------------------------------------------------------------------------
# Task dispatch


def _run_lie_cohomology(payload: dict, opts: dict) -> tuple:
    _expect(isinstance(payload, dict), "payload", "expected an object")
    unknown = set(payload) - {"algebra", "coefficients", "relative",
                              "factorized"}
    _expect(not unknown, "payload", f"unknown keys {sorted(unknown)}")
    g = parse_algebra(payload.get("algebra"), "payload.algebra")
    rep = None
    coeff = payload.get("coefficients")
    if coeff is not None:
        _expect(isinstance(coeff, dict), "payload.coefficients",
                "expected an object")
        ctype = coeff.get("type")
        if ctype == "trivial":
            rep = None
        elif ctype == "sym-coadjoint":
            power = _expect_int(coeff.get("power"),
                                "payload.coefficients.power", low=0)
            rep = lie.sym_power_rep(g, power)
        else:
            raise SchemaError("payload.coefficients.type",
                              "expected 'trivial' or 'sym-coadjoint'")
    sub = None
    if payload.get("relative") is not None:
        idx = payload["relative"]
        _expect(isinstance(idx, list) and idx, "payload.relative",
                "expected a non-empty list of generator indices")
        cols = []
        for t, k in enumerate(idx):
            k = _expect_int(k, f"payload.relative[{t}]", low=0)
            _expect(k < g.dim, f"payload.relative[{t}]", "index out of range")
            col = [Fraction(0)] * g.dim
            col[k] = Fraction(1)
            cols.append(col)
        try:
            sub = lie.build_subalgebra(g, cols)
        except Exception as exc:
            raise MathError(f"relative generators rejected: {exc}")
    factorized = payload.get("factorized", False)
    _expect(isinstance(factorized, bool), "payload.factorized",
            "expected a boolean")
    try:
        h = lie.lie_cohomology(g, rep, k=sub, factorized=factorized)
    except lie.FactorizationMismatch as exc:
        raise MathError(f"factorization mismatch: {exc}")
    except ValueError as exc:
        raise MathError(str(exc))
    top = g.dim
    result = {"dims": [h.dims.get(n, 0) for n in range(top + 1)]}
    if h.predicted_dims is not None:
        result["predicted"] = [h.predicted_dims.get(n, 0)
                               for n in range(top + 1)]
    return result, []


def _run_gdiff_check(payload: dict, opts: dict) -> tuple:
    c = parse_gdiff(payload, check=False)
    report = gd.check_gdiff_axioms(c, check_product=c.product is not None)
    if not report.ok:
        raise MathError(json.dumps(report.to_json(), sort_keys=True,
                                   default=_frac_json))
    return report.to_json(), []


def _opt(opts: dict, key: str, default=None):
    value = opts.get(key)
    return default if value is None else value


def _run_equivariant(payload: dict, opts: dict) -> tuple:
    c = parse_gdiff(payload, check=True)
    sym_cap = _expect_int(_opt(opts, "sym_cap", 2), "sym_cap", low=1)
    h = gd.equivariant_cohomology(c, sym_cap)
    warnings = [f"dims above total degree {h.band} are affected by the "
                f"symmetric-degree cap {sym_cap}"]
    result = h.to_json()
    result["dims_list"] = h.dims_list()
    return result, warnings


def _run_weil_check(payload: dict, opts: dict) -> tuple:
    _expect(isinstance(payload, dict), "payload", "expected an object")
    unknown = set(payload) - {"algebra", "sym_cap"}
    _expect(not unknown, "payload", f"unknown keys {sorted(unknown)}")
    g = parse_algebra(payload.get("algebra"), "payload.algebra")
    sym_cap = _opt(opts, "sym_cap", payload.get("sym_cap"))
    sym_cap = _expect_int(2 if sym_cap is None else sym_cap,
                          "sym_cap", low=1)
    w = gd.weil_algebra(g, sym_cap)
    h = cohomology(w.gdiff.complex)
    basic, _ = gd.basic_subcomplex(w.gdiff)
    hb = cohomology(basic)
    top = 2 * sym_cap
    result = {
        "sym_cap": sym_cap,
        "dims": [w.gdiff.complex.space.dim(n) for n in range(top + 1)],
        "cohomology_band": [h.dim(n) for n in range(sym_cap + 1)],
        "acyclic_in_band": all(h.dim(n) == 0
                               for n in range(1, sym_cap + 1))
        and h.dim(0) == 1,
        "basic_dims": [hb.dim(n) for n in range(top + 1)],
    }
    warnings = [f"acyclicity is certified for degrees <= {sym_cap} only"]
    return result, warnings


def _run_poisson_cohomology(payload: dict, opts: dict) -> tuple:
    parsed = parse_poisson(payload)
    _require_certified_cli(parsed["structure"])
    truncation = _opt(opts, "max_degree", parsed["maxdeg"])
    slice_degree = opts.get("slice")
    if truncation is None and slice_degree is None:
        raise SchemaError("payload.maxdeg",
                          "a truncation bound or --slice is required")
    try:
        h = po.poisson_cohomology(parsed["structure"],
                                  truncation=0 if truncation is None
                                  else truncation,
                                  slice_degree=slice_degree)
    except (po.UnsupportedRegime, ValueError) as exc:
        raise MathError(str(exc))
    warnings = []
    if h.band is not None:
        warnings.append(f"cohomology above coefficient degree {h.band} is "
                        "affected by the truncation cap")
    return h.to_json(), warnings


def _run_equivariant_poisson(payload: dict, opts: dict) -> tuple:
    parsed = parse_poisson(payload)
    _require_certified_cli(parsed["structure"])
    md = momentum_from_payload(parsed)
    sym_cap = _expect_int(_opt(opts, "sym_cap", 2), "sym_cap", low=1)
    slice_degree = opts.get("slice")
    truncation = None if slice_degree is not None else (
        _opt(opts, "max_degree", parsed["maxdeg"]))
    if truncation is None and slice_degree is None:
        raise SchemaError("payload.maxdeg",
                          "a truncation bound or --slice is required")
    try:
        rep = po.equivariant_poisson_cohomology(
            md, sym_cap=sym_cap, truncation=truncation,
            slice_degree=slice_degree, generators=parsed["generators"])
    except (po.UnsupportedRegime, ValueError) as exc:
        raise MathError(str(exc))
    h = rep.cohomology
    result = {"dims": h.dims_list(), "band": h.band,
              "invariant_function_dim": rep.invariant_function_dim,
              "basic_cross_check": rep.basic_cross_check}
    warnings = [f"dims above total degree {h.band} are affected by the "
                f"symmetric-degree cap {sym_cap}"]
    return result, warnings


def _run_momentum_ss(payload: dict, opts: dict) -> tuple:
    parsed = parse_poisson(payload)
    _require_certified_cli(parsed["structure"])
    md = momentum_from_payload(parsed)
    slice_degree = opts.get("slice")
    truncation = None if slice_degree is not None else (
        _opt(opts, "max_degree", parsed["maxdeg"]))
    if truncation is None and slice_degree is None:
        raise SchemaError("payload.maxdeg",
                          "a truncation bound or --slice is required")
    try:
        ss = po.momentum_spectral_sequence(md, truncation=truncation,
                                           slice_degree=slice_degree,
                                           r_max=opts.get("pages"))
    except (po.UnsupportedRegime, ValueError) as exc:
        raise MathError(str(exc))
    return ss.to_json(), []


def _run_example_task(payload: dict, opts: dict) -> tuple:
    _expect(isinstance(payload, dict), "payload", "expected an object")
    unknown = set(payload) - {"name", "parameters"}
    _expect(not unknown, "payload", f"unknown keys {sorted(unknown)}")
    name = payload.get("name")
    _expect(isinstance(name, str), "payload.name", "expected a string")
    parameters = payload.get("parameters", {})
    _expect(isinstance(parameters, dict), "payload.parameters",
            "expected an object")
    return run_example(name, parameters), []


_KIND_RUNNERS = {
    "lie-cohomology": _run_lie_cohomology,
    "gdiff-check": _run_gdiff_check,
    "equivariant": _run_equivariant,
    "weil-check": _run_weil_check,
    "poisson-cohomology": _run_poisson_cohomology,
    "equivariant-poisson": _run_equivariant_poisson,
    "momentum-ss": _run_momentum_ss,
    "example": _run_example_task,
}


def run_compute(task: dict, opts: Optional[dict] = None) -> dict:
    """Dispatch a schema-validated task and assemble the result report."""
    opts = dict(opts or {})
    _expect(isinstance(task, dict), "", "expected a task object")
    kind = task.get("kind")
    if kind not in KINDS:
        raise SchemaError("kind", f"expected one of {', '.join(KINDS)}")
    payload = task.get("payload")
    _expect(payload is not None, "payload", "missing payload")
    task_opts = task.get("options", {})
    _expect(isinstance(task_opts, dict), "options", "expected an object")
    for key, value in task_opts.items():
        opts.setdefault(key, value)
    result, warnings = _KIND_RUNNERS[kind](payload, opts)
    return {"kind": kind, "result": result, "warnings": warnings}


# ---------------------------------------------------------------------------
# Validation command


class MathGateError(Exception):
    pass


class _GateTable:
    def __init__(self):
        self.rows = []

    def run(self, name: str, fn: Callable) -> bool:
        try:
            fn()
        except SchemaError as exc:
            self.rows.append({"gate": name, "ok": False,
                              "field": exc.field, "detail": exc.message})
            return False
        except (MathError, MathGateError) as exc:
            self.rows.append({"gate": name, "ok": False,
                              "detail": str(exc)})
            return False
        self.rows.append({"gate": name, "ok": True})
        return True

    def skip(self, name: str):
        self.rows.append({"gate": name, "ok": False,
                          "detail": "skipped: an earlier gate failed"})
        return False


def _poisson_gates(data, table: _GateTable, prefix: str = "") -> bool:
    held = {}

    def schema():
        try:
            held["parsed"] = parse_poisson(data, prefix or "payload")
        except MathError as exc:
            # Shape is fine; remember the defect for the math gates.
            held["math"] = exc

    def antisymmetry():
        if "math" in held:
            raise MathGateError(str(held["math"]))

    def jacobi():
        p = held["parsed"]["structure"]
        if not p.certified:
            raise MathGateError(
                f"the bivector does not self-commute; defect "
                f"{p.jacobiator.as_dict()!r}")

    s = table.run("schema", schema)
    a = table.run("antisymmetry", antisymmetry) if s else table.skip(
        "antisymmetry")
    j = table.run("jacobi", jacobi) if s and a else table.skip("jacobi")
    return s and a and j


def _algebra_gates(data, table: _GateTable, prefix: str = "") -> bool:
    held = {}

    def schema():
        try:
            parse_algebra(data, prefix or "algebra")
        except MathError as exc:
            held["math"] = exc

    def brackets():
        if "math" in held:
            raise MathGateError(str(held["math"]))

    s = table.run("schema", schema)
    j = table.run("jacobi", brackets) if s else table.skip("jacobi")
    return s and j


def _gdiff_gates(data, table: _GateTable, prefix: str = "") -> bool:
    held = {}

    def schema():
        try:
            held["c"] = parse_gdiff(data, prefix or "payload", check=False)
        except MathError as exc:
            held["math"] = exc

    def axioms():
        if "math" in held:
            raise MathGateError(str(held["math"]))
        c = held["c"]
        report = gd.check_gdiff_axioms(c, check_product=c.product is not None)
        if not report.ok:
            raise MathGateError(json.dumps(report.to_json(), sort_keys=True,
                                           default=_frac_json))

    s = table.run("schema", schema)
    x = table.run("axioms", axioms) if s else table.skip("axioms")
    return s and x


def validate_input(data) -> dict:
    """Schema plus cheap mathematical gates, one pass/fail row per gate.
    Accepts a task file, a bivector payload, a bracket table, or an
    exported complex; the heavy cohomology routines are never invoked."""
    table = _GateTable()
    if isinstance(data, dict) and "kind" in data:
        def shape():
            kind = data.get("kind")
            if kind not in KINDS:
                raise SchemaError("kind",
                                  f"expected one of {', '.join(KINDS)}")
            if data.get("payload") is None:
                raise SchemaError("payload", "missing payload")
            if not isinstance(data.get("options", {}), dict):
                raise SchemaError("options", "expected an object")
            if kind == "example":
                name = data["payload"].get("name") if isinstance(
                    data["payload"], dict) else None
                if name not in EXAMPLES:
                    raise SchemaError("payload.name",
                                      f"expected one of "
                                      f"{', '.join(EXAMPLES)}")

        ok = table.run("task-shape", shape)
        payload = data.get("payload")
        if ok and isinstance(payload, dict):
            if "pi" in payload:
                ok = _poisson_gates(payload, table, "payload") and ok
            elif "d" in payload and "dims" in payload:
                ok = _gdiff_gates(payload, table, "payload") and ok
            elif "algebra" in payload:
                ok = _algebra_gates(payload["algebra"], table,
                                    "payload.algebra") and ok
        return {"gates": table.rows, "ok": ok}
    if isinstance(data, dict) and "pi" in data:
        return {"gates": table.rows, "ok": _poisson_gates(data, table)}
    if isinstance(data, dict) and "d" in data and "dims" in data:
        return {"gates": table.rows, "ok": _gdiff_gates(data, table)}
    if isinstance(data, dict) and ("brackets" in data or "dim" in data):
        return {"gates": table.rows, "ok": _algebra_gates(data, table)}
    raise SchemaError("", "unrecognized input shape: expected a task file, "
                      "a bivector payload, an algebra, or a complex")


# ---------------------------------------------------------------------------
# Output assembly


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key in sorted(obj, key=str):
            yield from _flatten(obj[key], f"{prefix}.{key}" if prefix
                                else str(key))
    elif isinstance(obj, (list, tuple)):
        for t, item in enumerate(obj):
            yield from _flatten(item, f"{prefix}[{t}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        lines = ["field,value"]
        for path, value in _flatten(report):
            if isinstance(value, Fraction):
                value = str(value)
            lines.append(f"{path},{value}")
        return "\n".join(lines) + "\n"
    return json.dumps(report, sort_keys=True, indent=2,
                      default=_frac_json) + "\n"


def _emit_error(code: int, exc: Exception, fmt: str) -> int:
    if isinstance(exc, SchemaError):
        body = {"error": {"code": code, "kind": "schema",
                          "field": exc.field, "message": exc.message}}
    else:
        body = {"error": {"code": code, "kind": "math",
                          "witness": str(exc)}}
    sys.stdout.write(render(body, fmt))
    return code


# ---------------------------------------------------------------------------
# Argument parsing and entry point


def _read_task_file(path: str) -> tuple:
    try:
        raw = open(path, "rb").read()
    except OSError as exc:
        raise SchemaError("file", f"cannot read {path}: {exc.strerror}")
    if not raw.strip():
        raise SchemaError("file", f"{path} is empty")
    try:
        return json.loads(raw.decode("utf-8")), raw
    except (UnicodeDecodeError, ValueError) as exc:
        raise SchemaError("file", f"{path} is not valid JSON: {exc}")


def _collect_opts(args) -> dict:
    opts = {}
    for key in ("sym_cap", "max_degree", "slice", "pages", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _add_common(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--timing", action="store_true",
                     help="append wall-clock timing to the report")
    sub.add_argument("--jobs", type=int, default=None,
                     help="parallelism hint for module internals")


def _add_bounds(sub):
    sub.add_argument("--sym-cap", dest="sym_cap", type=int, default=None)
    sub.add_argument("--max-degree", dest="max_degree", type=int,
                     default=None)
    sub.add_argument("--slice", dest="slice", type=int, default=None)
    sub.add_argument("--pages", dest="pages", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equicoh",
        description="Exact-rational equivariant and Poisson cohomology.")
    subs = parser.add_subparsers(dest="command", required=True)

    comp = subs.add_parser("compute", help="run a task file")
    comp.add_argument("file")
    _add_common(comp)
    _add_bounds(comp)

    exam = subs.add_parser("example", help="run a named bundled example")
    exam.add_argument("name")
    exam.add_argument("--roots", default=None)
    exam.add_argument("--fprime", default=None)
    exam.add_argument("--slices", default=None)
    exam.add_argument("--planes", type=int, default=None)
    _add_common(exam)
    _add_bounds(exam)

    val = subs.add_parser("validate", help="schema and math gates only")
    val.add_argument("file")
    _add_common(val)

    for kind in KINDS:
        if kind == "example":
            continue
        sugar = subs.add_parser(kind, help=f"run a {kind} payload file")
        sugar.add_argument("file")
        _add_common(sugar)
        _add_bounds(sugar)
    return parser


def _example_parameters(args) -> dict:
    params = {}
    if args.roots is not None:
        params["roots"] = args.roots
    if args.fprime is not None:
        params["fprime"] = args.fprime
    if args.slices is not None:
        params["slices"] = args.slices
    if args.planes is not None:
        params["planes"] = args.planes
    if args.sym_cap is not None:
        params["sym_cap"] = args.sym_cap
    if args.max_degree is not None:
        params["max_degree"] = args.max_degree
    return params


def main(argv: Optional[Sequence] = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    timer = None
    if args.timing:
        import time
        timer = time.monotonic()
    try:
        if args.command == "compute":
            data, raw = _read_task_file(args.file)
            report = run_compute(data, _collect_opts(args))
            report["digest"] = _digest(raw)
        elif args.command == "example":
            params = _example_parameters(args)
            try:
                result = run_example(args.name, params)
            except UnknownExample as exc:
                raise SchemaError("name", str(exc))
            canon = json.dumps({"name": args.name, "parameters": params},
                               sort_keys=True).encode("utf-8")
            report = {"kind": "example", "name": args.name,
                      "result": result, "warnings": [],
                      "digest": _digest(canon)}
        elif args.command == "validate":
            data, raw = _read_task_file(args.file)
            table = validate_input(data)
            report = {"kind": "validate", "result": table,
                      "warnings": [], "digest": _digest(raw)}
            if not table["ok"]:
                schema_bad = any(not g["ok"] and ("field" in g
                                                  or g["gate"] == "task-shape")
                                 for g in table["gates"])
                sys.stdout.write(render(report, fmt))
                return 2 if schema_bad else 3
        else:
            data, raw = _read_task_file(args.file)
            report = run_compute({"kind": args.command, "payload": data},
                                 _collect_opts(args))
            report["digest"] = _digest(raw)
    except SchemaError as exc:
        return _emit_error(2, exc, fmt)
    except (MathError, po.UncertifiedPoisson) as exc:
        return _emit_error(3, exc, fmt)
    if timer is not None:
        import time
        report["timing_seconds"] = round(time.monotonic() - timer, 6)
    sys.stdout.write(render(report, fmt))
    return 0


if __name__ == "__main__":
    sys.exit(main())
