# criterion label -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def _criterion_order(label):
    digits = "".join(ch for ch in label if ch.isdigit())
    return int(digits), label


def random_complex(rng, shape, scale=1.0):
    return scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=_criterion_order):
        passed, detail = ACCEPTANCE_RESULTS[label]
        terminalreporter.write_line(f"criterion {label:>3}: {'PASS' if passed else 'FAIL'}  {detail}")
