_criterion_lines = []


def record_criterion(number, passed, detail):
    _criterion_lines.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, passed, detail in sorted(_criterion_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} — {detail}")
