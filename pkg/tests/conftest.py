import os

from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))



def pytest_terminal_summary(terminalreporter, config):
    """One line per acceptance criterion, aggregated over its cases."""
    lines = getattr(config, "acceptance_lines", None)
    if not lines:
        return
    groups = {}
    for line in lines:
        head, _, detail = line.partition("  ")
        number = int(head.split()[1].rstrip(":"))
        groups.setdefault(number, []).append(head.endswith("PASS"))
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(groups):
        oks = groups[number]
        terminalreporter.write_line("criterion %d: %s (%d/%d cases)"
                                    % (number, "PASS" if all(oks) else "FAIL", sum(oks), len(oks)))
