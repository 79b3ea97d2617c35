import csv

from blc.harness import SuiteResult
from blc.report import write_report


def result(name, crit, passed, failed, unknown, ok):
    return SuiteResult(name, crit, name, "100%", passed, failed, unknown, passed / (passed + failed + unknown), ok, 0.5, [])


def test_tsv_and_png(tmp_path):
    rs = [result("alpha", 1, 10, 0, 0, True), result("beta", 2, 7, 0, 3, False)]
    write_report(rs, tmp_path)
    with open(tmp_path / "results.tsv", newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    assert [r["suite"] for r in rows] == ["alpha", "beta"]
    assert rows[1]["unknown"] == "3" and rows[1]["ok"] in ("False", "FAIL", "false", "0")
    png = (tmp_path / "counts.png").read_bytes()
    assert png.startswith(b"\x89PNG")
