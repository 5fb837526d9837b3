"""Regenerates the bundled JSON inputs under src/equicoh/data/.

Run from the repository root:  python3 tools/gen_fixtures.py
Every file is written with sorted keys so reruns are byte-stable."""

import copy
import json
import pathlib

from equicoh import gdiff as gd
from equicoh import lie
from equicoh.cli import gdiff_to_json, parse_gdiff

OUT = pathlib.Path(__file__).resolve().parent.parent / "src/equicoh/data"

SU2 = {"dim": 3, "compact_type": True, "name": "su2",
       "brackets": [[0, 1, [[2, "1"]]], [1, 2, [[0, "1"]]],
                    [0, 2, [[1, "-1"]]]]}


def unit_exp(n, j, power=1):
    e = [0] * n
    e[j] = power
    return e


def write(name, data):
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    (OUT / name).write_text(text)
    print(f"wrote {name} ({len(text)} bytes)")


def main():
    OUT.mkdir(exist_ok=True)

    write("su2.json", {
        "kind": "lie-cohomology",
        "payload": {"algebra": SU2},
    })

    write("heisenberg.json", {
        "kind": "lie-cohomology",
        "payload": {"algebra": {"dim": 3, "name": "heis3",
                                "brackets": [[0, 1, [[2, "1"]]]]}},
    })

    write("su2_dual.json", {
        "ambient": 3, "maxdeg": 4, "regime": "linear",
        "pi": [[[0, 1], {"exponents": unit_exp(3, 2), "coeff": "1"}],
               [[1, 2], {"exponents": unit_exp(3, 0), "coeff": "1"}],
               [[0, 2], {"exponents": unit_exp(3, 1), "coeff": "-1"}]],
        "action": {"algebra": SU2},
        "mu": [[{"exponents": unit_exp(3, j), "coeff": "1"}]
               for j in range(3)],
        "submersive": True,
    })

    write("circle_q2.json", {
        "ambient": 2, "regime": "constant",
        "pi": [[[0, 1], {"exponents": [0, 0], "coeff": "1"}]],
        "action": {"algebra": {"dim": 1, "brackets": [], "name": "circle"}},
        "mu": [[{"exponents": [2, 0], "coeff": "-1/2"},
                {"exponents": [0, 2], "coeff": "-1/2"}]],
    })

    write("torus_q4.json", {
        "ambient": 4, "regime": "constant",
        "pi": [[[0, 1], {"exponents": [0, 0, 0, 0], "coeff": "1"}],
               [[2, 3], {"exponents": [0, 0, 0, 0], "coeff": "1"}]],
        "action": {"algebra": {"dim": 2, "brackets": [], "name": "torus2"}},
        "mu": [[{"exponents": [2, 0, 0, 0], "coeff": "-1/2"},
                {"exponents": [0, 2, 0, 0], "coeff": "-1/2"}],
               [{"exponents": [0, 0, 2, 0], "coeff": "-1/2"},
                {"exponents": [0, 0, 0, 2], "coeff": "-1/2"}]],
    })

    # The CE complex of su(2) with its wedge product, exported as matrix
    # blocks, and a copy with one contraction entry corrupted.
    ce = lie.ce_complex(lie.su2())
    c = gd.ce_gdiff(ce)
    exported = gdiff_to_json(c)
    rebuilt = parse_gdiff(exported)  # raises if the export is unfaithful
    assert gd.check_gdiff_axioms(rebuilt).ok
    write("ce_su2_gdiff.json", exported)

    broken = copy.deepcopy(exported)
    block = broken["contractions"][0]["1"]
    assert block[0][0] == "1"
    block[0][0] = "0"  # i_{e_0} no longer hits the e_0-coordinate
    check = parse_gdiff(broken, check=False)
    report = gd.check_gdiff_axioms(check)
    assert not report.ok, "the corrupted export still passes the axioms"
    write("broken_contraction.json", broken)

    write("non_jacobi.json", {
        "dim": 3, "name": "broken3",
        "brackets": [[0, 1, [[2, "1"]]], [1, 2, [[0, "1"]]],
                     [0, 2, [[0, "1"]]]],
    })


if __name__ == "__main__":
    main()
