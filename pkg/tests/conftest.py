import pytest

# criterion number -> (passed, detail), filled by the acceptance suite
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    for num in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[num]
        terminalreporter.write_line('criterion {}: {}  {}'.format(
            num, 'PASS' if passed else 'FAIL', detail))


@pytest.fixture
def report():
    def record(num, passed, detail=''):
        ACCEPTANCE[num] = (bool(passed), detail)
        print('criterion {}: {}  {}'.format(num, 'PASS' if passed else 'FAIL', detail))
        return passed
    return record
