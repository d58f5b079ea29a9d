from helpers import ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok, elapsed, limit, detail = ACCEPTANCE_RESULTS[number]
        line = f"{'PASS' if ok else 'FAIL'}  {number:2d}  {title}  ({elapsed:.2f}s, limit {limit:g}s)"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
