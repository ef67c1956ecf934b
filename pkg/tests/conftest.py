import pytest

from catrit.index import InvertedIndex

# five-word, sixteen-document example index used throughout the tests
FIG2_POSTINGS = [[12, 16], [2, 7, 8, 10, 11, 13], [2, 3, 4], [11], [4, 5, 6, 9, 14, 16]]

TRIT_CODECS = ["tc", "tca", "tc-quatrit", "tca-quatrit"]
BLOCK_CONFIGS = [f"block-interp:padding={p},redundant_max={r}" for p in (0, 1) for r in (0, 1)]
UNIVERSAL = ["unary", "binary", "gamma", "delta", "zeta", "golomb", "rice", "vbyte", "vnibble"]
ALL_CODECS = TRIT_CODECS + ["interp"] + BLOCK_CONFIGS + UNIVERSAL

_acceptance_lines: list[str] = []


@pytest.fixture
def fig2_index():
    return InvertedIndex(16, [list(p) for p in FIG2_POSTINGS])


@pytest.fixture
def report_criterion():
    """Record one pass/fail line per acceptance criterion for the summary."""
    def record(name: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        _acceptance_lines.append(f"[{status}] {name}" + (f": {detail}" if detail else ""))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
