import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(acceptance_log.LINES):
        lines = acceptance_log.LINES[k]
        failed = [l for l in lines if l.startswith("FAIL")]
        status = "FAIL" if failed else "PASS"
        terminalreporter.write_line(f"{status} criterion {k} ({len(lines)} parts)")
        for l in lines:
            terminalreporter.write_line("    " + l)
