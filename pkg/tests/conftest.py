"""Collects acceptance-criterion outcomes and prints one line per
criterion at the end of the run, pass or fail."""

ACCEPTANCE: "list[tuple[int, str, bool, str]]" = []


def record(num: int, name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((num, name, bool(ok), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(ACCEPTANCE):
        line = "criterion %02d  %-24s  %s" % (num, name, "PASS" if ok else "FAIL")
        if detail:
            line += "  [%s]" % detail
        terminalreporter.write_line(line)
