"""Settings file handling: numeric tolerances and bandlimited window defaults."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config.json"


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """Read the settings file at *path* (the repository ``config.json`` by default).

    A missing file means no overrides. An unreadable file, invalid JSON or a
    top-level value that is not an object is logged as a
    ``settings_unreadable`` event and also yields ``{}``.
    """

    cfg_path = Path(path or DEFAULT_CONFIG_PATH)
    if not cfg_path.exists():
        logger.debug("No settings file at %s", cfg_path)
        return {}
    try:
        payload = json.loads(cfg_path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        log_data = {"event": "settings_unreadable", "path": str(cfg_path), "error": str(exc)}
        logger.warning(json.dumps(log_data))
        return {}
    if not isinstance(payload, dict):
        log_data = {
            "event": "settings_unreadable",
            "path": str(cfg_path),
            "error": f"expected a JSON object, got {type(payload).__name__}",
        }
        logger.warning(json.dumps(log_data))
        return {}
    return payload


def apply_config(config: Dict[str, Any]) -> None:
    """Push a loaded settings mapping into the tolerance and window globals.

    Supported keys in *config*:

    ``tolerances``: mapping passed to :func:`frameq.tolerances.apply_tolerances`.
    ``window``: mapping with ``edge`` (roll-off edge in multiples of pi) and
    ``family`` merged into :mod:`frameq.bandlimited_lab` defaults.
    """

    from . import bandlimited_lab, tolerances

    tolerances_cfg = config.get("tolerances")
    if isinstance(tolerances_cfg, dict):
        tolerances.apply_tolerances(tolerances_cfg)

    window_cfg = config.get("window")
    if isinstance(window_cfg, dict):
        if "edge" in window_cfg:
            bandlimited_lab.DEFAULT_EDGE = float(window_cfg["edge"])
        if "family" in window_cfg:
            bandlimited_lab.DEFAULT_FAMILY = str(window_cfg["family"])
