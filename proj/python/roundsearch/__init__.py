"""Python front end for the roundsearch C++ core."""

import json

from . import _core
from ._core import BudgetExceeded, GameFailure, ceil_root, solve

__all__ = ["BudgetExceeded", "GameFailure", "bounds", "ceil_root", "forced_excellent", "play", "solve", "sweep_csv"]


def bounds(n, d, r):
    return json.loads(_core.bounds_json(n, d, r))


def play(n, d, r, questioner, adversary="endgame-auto", seed=0):
    """Referee one game and return the result as a dict."""
    return json.loads(_core.play_json(n, d, r, questioner, adversary, seed))


def forced_excellent(transcript):
    """Forced elements after a transcript given as a dict (or JSON text)."""
    text = transcript if isinstance(transcript, str) else json.dumps(transcript)
    n = json.loads(text)["config"]["n"]
    return _core.forced_excellent(n, text)


def sweep_csv(ns, ds, rs, pairs, seed=0):
    return _core.sweep_csv(list(ns), list(ds), list(rs), [tuple(p) for p in pairs], seed)
