"""Smoke test for the `loony` Python module.

Run from the repository root:

    python3 python/smoke_test.py

If `loony` is not importable (for example not installed with maturin), the
extension is built with cargo and loaded from the target directory.
"""

import importlib
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("loony")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "loony-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    ext = {"darwin": "libpyloony.dylib", "win32": "pyloony.dll"}.get(sys.platform, "libpyloony.so")
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    out = tempfile.mkdtemp()
    suffix = ".pyd" if sys.platform == "win32" else ".so"
    shutil.copy(os.path.join(target, "release", ext), os.path.join(out, "loony" + suffix))
    sys.path.insert(0, out)
    return importlib.import_module("loony")


def main():
    loony = load()

    assert loony.canonical("6L+3+3") == "2*3+6L"
    assert loony.components("2*3+4+6L") == [("3", 2), ("4", 1), ("6L", 1)]
    assert loony.value("3+4+100*4L+100*6L") == 3
    assert loony.value("") == 0
    assert loony.controlled_value("2*3+4+6L") == (-4, 4, 0)
    assert loony.value("3+4+1000000*4L+1000000*6L") == 3

    subjects = {s: v for s, _, v in loony.trace("3+4+100*4L+100*6L")}
    assert subjects["G\\3"] == 4 and subjects["G\\all-4L"] == 3

    open_, rule, mv = loony.best_open("3+3*6L")
    assert (open_, mv) == ("3", 1), (open_, mv)
    assert rule.startswith("open/")
    assert loony.move_value("3+3*6L", "6L") == 3

    assert loony.oracle_value("4+7L+7L") == 4
    assert dict(loony.oracle_move_values("4+4L+4L+7L+7L")) == {"4": 2, "4L": 4, "7L": 4}
    assert loony.optimal_opens("4L+6L") == ["4L", "6L"]

    a = loony.analyze("4+2*7L")
    assert a["value"] == 4 and a["oracle_fallback"]

    for bad in ["3+2", "3L", "3+"]:
        try:
            loony.value(bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"{bad!r} accepted")
    try:
        loony.value("4+7L+7L")
    except ValueError as e:
        assert "odd loop" in str(e)
    else:
        raise AssertionError("odd loops accepted by the solver")

    assert loony.self_play("2*3+4+6L") == (7, 9)

    s = loony.Session("2*3+4+6L", "A")
    assert s.advice()["open"] == "3"
    s.open("3")
    assert s.phase == "controllerToDecide" and s.opened == "3"
    assert s.advice()["choice"] == "TakeAll"
    try:
        s.open("4")
    except ValueError:
        pass
    else:
        raise AssertionError("open accepted while a decision is pending")
    s.decide("TakeAll")
    while not s.terminal:
        s.step()
    assert (s.score_a, s.score_b) == (7, 9)
    assert s.margin("B") == 2
    assert s.advice() is None
    assert '"scoreB":9' in s.to_json()

    print("python smoke test ok")


if __name__ == "__main__":
    main()
