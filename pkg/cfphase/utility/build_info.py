import os
import subprocess

__version__ = "0.3.0"

_build_id = None


def build_id():
    global _build_id
    if _build_id is not None:
        return _build_id

    here = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=here, capture_output=True, text=True, timeout=5)
        desc = out.stdout.strip() if out.returncode == 0 else ""
    except (OSError, subprocess.SubprocessError):
        desc = ""

    _build_id = "cfphase-%s" % __version__
    if desc:
        _build_id += "-" + desc
    return _build_id
