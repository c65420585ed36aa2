ACCEPTANCE = {}


def record(number, title, checks):
    """checks: list of (description, ok, detail). Returns True when all pass."""
    ok = all(c[1] for c in checks)
    ACCEPTANCE[number] = (title, ok, checks)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, checks = ACCEPTANCE[n]
        tr.write_line("criterion %d: %s  %s" % (n, "PASS" if ok else "FAIL", title))
        for desc, good, detail in checks:
            tr.write_line("    [%s] %s%s" % ("ok" if good else "FAIL", desc, ("  (%s)" % detail) if detail else ""))
