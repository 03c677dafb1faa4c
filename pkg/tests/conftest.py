from collections import OrderedDict

# criterion number -> list of (part, passed, detail); filled by test_acceptance
ACCEPTANCE = OrderedDict()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, parts in sorted(ACCEPTANCE.items()):
        ok = all(p[1] for p in parts)
        title = parts[0][3]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {crit}: {title}")
        for part, passed, detail, _ in parts:
            terminalreporter.write_line(f"       {'ok ' if passed else 'BAD'} {part}: {detail}")
