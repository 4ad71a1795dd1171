"""Smoke test for the tprop extension: run after `pip install --no-build-isolation -e crates/py`."""

import json
from pathlib import Path

import tprop

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    b1 = tprop.Bialgebra.from_file(str(DATA / "b1.json"))
    b2 = tprop.Bialgebra.from_file(str(DATA / "b2.json"))

    assert b1.is_bialgebra()
    assert not b2.is_bialgebra()
    assert json.loads(b1.mc_defect())["zero"]

    compat = json.loads(b2.defects())["compatibility"]["entries"]
    assert [(e["out"], e["in"], e["value"]) for e in compat] == [
        ([1, 1], [2, 2], "-1/1"),
        ([2, 2], [2, 2], "-2/1"),
    ]
    assert json.loads(b1.bracket("beta", "beta"))["zero"]

    # Δ∘★ computed directly and through the word syntax agree.
    square = b1.coproduct.compose(b1.product)
    via_word = json.loads(b1.evaluate("st_col(2,2) occ st_row(2,2)"))["payload"]
    assert json.loads(square.to_json()) == via_word

    # Associativity of the group product through the insertion operations.
    star = b1.product
    assert star.jcirc(star, 1) == star.jcirc(star, 2)

    half = tprop.Tensor(1, 1, 1, ["1/2"])
    assert half.compose(half).coeffs() == ["1/4"]

    assert tprop.homology(2, 2) == ([2, 1], [1, 0])
    assert tprop.homology(1, 4) == ([5, 5, 1], [1, 0, 0])
    assert tprop.normal_form("k(2,1) [1]o k(1,2)") == "k(2,1) o[1] k(1,2)"

    report = json.loads(tprop.check_axioms(1, 5, 5, 3))
    failing = sorted(r["name"] for r in report["results"] if not r["passed"])
    assert failing == ["(A)", "(B)"], failing

    try:
        tprop.Bialgebra.from_json('{"dim": 2')
    except ValueError as e:
        assert "bad bialgebra file" in str(e)
    else:
        raise AssertionError("truncated file accepted")

    print("smoke ok")


if __name__ == "__main__":
    main()
