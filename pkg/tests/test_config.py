import json
import logging

from frameq import bandlimited_lab, tolerances
from frameq.config import apply_config, load_config


def test_apply_config_overrides(tmp_path, restore_tolerances):
    cfg_path = tmp_path / "cfg.json"
    cfg = {
        "tolerances": {"kashin_max_iter": 750, "net_push": 0.35},
        "window": {"edge": 3.0, "family": "mollified_bump"},
    }
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")

    orig_edge = bandlimited_lab.DEFAULT_EDGE
    orig_family = bandlimited_lab.DEFAULT_FAMILY

    apply_config(load_config(cfg_path))

    assert tolerances.KASHIN_MAX_ITER == 750
    assert tolerances.NET_PUSH == 0.35
    assert bandlimited_lab.DEFAULT_EDGE == 3.0
    assert bandlimited_lab.DEFAULT_FAMILY == "mollified_bump"

    # restore
    bandlimited_lab.DEFAULT_EDGE = orig_edge
    bandlimited_lab.DEFAULT_FAMILY = orig_family


def test_load_config_missing_or_malformed(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        assert load_config(tmp_path / "missing.json") == {}
    assert "settings_unreadable" not in caplog.text

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        assert load_config(broken) == {}
    events = [json.loads(r.getMessage()) for r in caplog.records if "settings_unreadable" in r.getMessage()]
    assert events and events[0]["path"] == str(broken)


def test_load_config_rejects_non_object(tmp_path, caplog):
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        assert load_config(listing) == {}
    assert "expected a JSON object" in caplog.text


def test_repository_config_is_valid(restore_tolerances):
    cfg = load_config()
    assert set(cfg) <= {"tolerances", "window"}
    apply_config(cfg)
