import re
from datetime import date
from pathlib import Path

from frameq import __version__

ROOT = Path(__file__).resolve().parent.parent


def test_latest_changelog_entry_matches_version():
    text = (ROOT / "CHANGELOG.md").read_text(encoding="utf-8")
    match = re.search(r"## \[([^\]]+)\] - (\d{4}-\d{2}-\d{2})", text)
    assert match, "No version entry found in CHANGELOG.md"
    assert match.group(1) == __version__
    date.fromisoformat(match.group(2))


def test_package_version_matches_manifest():
    text = (ROOT / "pyproject.toml").read_text(encoding="utf-8")
    match = re.search(r'^version = "([^"]+)"', text, re.MULTILINE)
    assert match and match.group(1) == __version__
