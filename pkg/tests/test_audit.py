import json
import os

from src.utils.audit import AuditLogger


def month_dir(root):
    (entry,) = os.listdir(root)
    return os.path.join(root, entry)


def test_audit_appends_records_and_counts(tmp_path):
    logger = AuditLogger(str(tmp_path))
    path = logger.write_command_audit("phase", {"s1": 0.7}, 0, 12, residuals={"closure": 1e-15})
    logger.write_command_audit("phase", {"s1": 9.0}, 1, 3, error={"error_code": "INVALID_PARAMETER"})
    logger.write_command_audit("decompose", {"matrix": "u.txt"}, 0, 40)

    lines = open(path, encoding="utf-8").read().splitlines()
    assert len(lines) == 3
    first, second = json.loads(lines[0]), json.loads(lines[1])
    assert first["residuals"] == {"closure": 1e-15}
    assert "error" not in first
    assert second["error"]["error_code"] == "INVALID_PARAMETER"

    with open(os.path.join(month_dir(str(tmp_path)), "manifest.json"), encoding="utf-8") as f:
        manifest = json.load(f)
    assert manifest["commands"]["phase"] == {"runs": 2, "failures": 1}
    assert manifest["commands"]["decompose"] == {"runs": 1, "failures": 0}
    assert manifest["totals"] == {"runs": 3, "failures": 1, "total_timing_ms": 55}


def test_corrupt_manifest_is_replaced(tmp_path):
    logger = AuditLogger(str(tmp_path))
    with open(os.path.join(month_dir(str(tmp_path)), "manifest.json"), "w", encoding="utf-8") as f:
        f.write("{not json")
    logger.write_command_audit("sweep", {}, 0, 5)
    with open(os.path.join(month_dir(str(tmp_path)), "manifest.json"), encoding="utf-8") as f:
        assert json.load(f)["totals"]["runs"] == 1
