"""Smoke test for the linkgame Python module.

Build and install first:  pip install --no-build-isolation -e crates/python
Run:                      python3 python/smoke_test.py
"""

from pathlib import Path

import linkgame

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def check_word():
    w = linkgame.Word("(1,4,2,1,3,5,3,2,1,2,0,5,2,6,4)")
    assert w.decomposition() == "(1,4,2,1,3*,5,3,2*,1,2,0,5,2*,6,4*)", w.decomposition()
    assert w.crossing_count == 41
    assert str(linkgame.Word("(1,0,2,3)").reduce()) == "(3,3)"
    zero = linkgame.Word("(0)")
    assert zero.fraction() == "∞"
    assert "splittable" in zero.verdict()
    assert linkgame.Word("((2))").is_resolved is False


def check_shadow():
    wh = linkgame.Shadow.from_pd((FIXTURES / "whitehead.pd").read_text())
    assert wh.component_count == 2
    assert wh.si_crossings() == [0]
    assert wh.nsi_crossings() == [1, 2, 3, 4]
    assert wh.applicable_strategies("linker") == ["linking-first"]
    again = linkgame.Shadow.from_pd(wh.pd())
    assert again.crossing_count == wh.crossing_count
    assert linkgame.Shadow.preset("hopf").crossing_count == 2


def check_game():
    game = linkgame.Game(linkgame.Shadow.preset("whitehead"), "linker")
    while game.mover is not None:
        if game.mover == "Linker":
            crossing, resolution, _ = game.strategy_move("linking-first")
        else:
            crossing, resolution = game.legal_moves()[0]
        game.play(crossing, resolution)
    winner, verdict = game.outcome()
    assert winner == "Linker", (winner, verdict)
    game.undo()
    assert game.outcome() is None
    assert len(game.history) == 4
    try:
        game.play(99, "/")
    except ValueError:
        pass
    else:
        raise AssertionError("illegal move accepted")


def check_solver_and_verifier():
    r = linkgame.solve_word("(1,1)", "unlinker", "numerator")
    assert r["summary"] == "second mover (Linker) wins", r
    r = linkgame.Game(linkgame.Shadow.from_word("(2)", "denominator"), "linker").solve()
    assert r["winning_role"] == "Unlinker", r
    clean, summary = linkgame.verify(linkgame.Shadow.preset("whitehead"), "linker", "linking-first")
    assert clean, summary
    passed, line = linkgame.criterion(1)
    assert passed, line


def main():
    for check in (check_word, check_shadow, check_game, check_solver_and_verifier):
        check()
        print(f"ok  {check.__name__}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
