import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).parent.parent / "demos"


@pytest.mark.parametrize("script, args", [
    ("replay_walkthrough.py", []),
    ("opacity_verdicts.py", []),
    ("export_structures.py", ["{tmp}"]),
    ("random_crosscheck.py", ["5"]),
])
def test_demo_runs(tmp_path, script, args):
    argv = [a.format(tmp=tmp_path) for a in args]
    proc = subprocess.run([sys.executable, str(DEMOS / script), *argv], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout
