"""Smoke test for the `vasreach` extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/vasreach-*.whl
"""

from pathlib import Path

import vasreach

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    vas = vasreach.System(2, [("a", [1, 1]), ("b", [-1, -2])])
    assert vas.run([0, 2], ["a", "a", "a", "a", "b", "b", "b"]) == [1, 0]
    assert vas.run([0, 0], ["b"]) is None
    assert vas.run([None, 2], ["b"]) == [None, 0]
    assert vas.covers([0, 2], [None, 5])

    verdict, witness = vas.decide([0, 2], [1, 0])
    assert verdict == "reachable" and len(witness) == 7, (verdict, witness)

    verdict, formula = vas.decide([0, 2], [0, 3], templates=True)
    assert verdict == "unreachable", verdict
    assert vas.check_certificate(formula, [0, 2], [0, 3]) == []
    assert vas.check_certificate(formula, [0, 2], [1, 0]) != []

    hp = vasreach.System.parse((FIXTURES / "hp79.vass").read_text())
    assert hp.states == ["p", "q"]
    verdict, _ = hp.decide([1, 0, 0], [2, 0, 0], source_state="p", target_state="q")
    assert verdict == "reachable"

    model = vasreach.satisfiable("x1 + x2 = 7 && x1 - x2 >= 3 && x1 mod 2 = 0")
    assert model is not None and model[0] + model[1] == 7 and model[0] % 2 == 0
    assert vasreach.satisfiable("2*x1 = 1") is None

    parts = vasreach.intersect_linear([0, 0], [[1, 0], [1, 1]], [8, 2], [[1, 0], [3, -1]])
    assert sorted(b for b, _ in parts) == [[8, 2], [11, 1], [14, 0]]
    assert all(p == [[1, 0]] for _, p in parts)
    assert vasreach.interior_contains([[1, 1], [-1, 1]], [0, 2])
    assert not vasreach.interior_contains([[1, 1], [-1, 1]], [3, 3])
    assert vasreach.dim_linear([0, 0], [[1, 0], [1, 1]]) == 2
    assert sorted(vasreach.hilbert_basis([[1, -1, 0], [0, 1, -1]])) == [[1, 1, 1]]

    for name, perfect in [("all_top_fig1", True), ("decrement_pinned", False)]:
        u = vasreach.Mrgs.parse((FIXTURES / "mrgs" / f"{name}.mrgs").read_text())
        assert u.is_perfect() is perfect
        word = u.realize(3)
        assert (word is not None) is perfect

    print("python smoke test passed")


if __name__ == "__main__":
    main()
