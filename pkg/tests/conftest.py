import re

_CRITERION = re.compile(r"test_criterion_(\d+)([a-z]?)_(\w+)")


def _tag_key(tag):
    num, suffix = tag
    return (num, suffix)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = {}
    for key, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(key, []):
            if "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            m = _CRITERION.search(rep.nodeid.split("::")[-1])
            if not m:
                continue
            tag = (int(m.group(1)), m.group(2))
            label = m.group(3).replace("_", " ")
            current = rows.get(tag)
            if current is None or verdict == "FAIL":
                rows[tag] = (verdict, label)
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for tag in sorted(rows, key=_tag_key):
        verdict, label = rows[tag]
        name = f"{tag[0]}{tag[1]}"
        terminalreporter.write_line(f"criterion {name}: {verdict}  ({label})")
