from fractions import Fraction as F

import pytest

from wakimoto.fock import ModuleParams, Sector

LEVELS = (F(1), F(1, 3), F(7, 5))
LABELS = (F(0), F(1, 2), F(2))


@pytest.fixture
def k1():
    """Level one, i.e. (p, p') = (3, 1)."""
    return ModuleParams.from_pp(3, 1)


@pytest.fixture
def nu_half(k1):
    return Sector(F(1, 2), k1)


# ---------------------------------------------------------------------------
# acceptance ledger: every criterion prints one PASS/FAIL line at the end

CRITERIA = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
    entry = CRITERIA.setdefault(number, {"title": title, "ok": True, "details": []})
    entry["ok"] = entry["ok"] and bool(ok)
    if detail:
        entry["details"].append(("ok  " if ok else "BAD ") + detail)
    line = "criterion %d: %s  %s%s" % (number, "PASS" if ok else "FAIL", title,
                                       " (%s)" % detail if detail else "")
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        e = CRITERIA[n]
        terminalreporter.write_line("criterion %d: %s  %s" % (n, "PASS" if e["ok"] else "FAIL",
                                                               e["title"]))
        for d in e["details"]:
            if d.startswith("BAD"):
                terminalreporter.write_line("    " + d)
