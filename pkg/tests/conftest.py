import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        status, summary = mod.RESULTS[num]
        terminalreporter.write_line(f"criterion {num} ({mod.TITLES[num]}): {status.upper()} - {summary}")
    for num in sorted(set(mod.TITLES) - set(mod.RESULTS)):
        terminalreporter.write_line(f"criterion {num} ({mod.TITLES[num]}): NOT RUN")
