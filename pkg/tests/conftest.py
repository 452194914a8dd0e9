import re


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    match = re.search(r"test_([ps]\d+)\w*", report.nodeid)
    if not match:
        return
    criterion = match.group(1).upper()
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\n[{verdict}] {criterion} ({report.nodeid.split('::')[-1]})")
