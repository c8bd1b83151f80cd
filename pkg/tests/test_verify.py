from __future__ import annotations

import re

import pytest

from tamejet.field import QQ, Field
from tamejet.verify import REPORT_VERSION, verify_paper, verify_suite_section5

F2, F3, F5, F7 = (Field.parse(f"F{p}") for p in (2, 3, 5, 7))


def test_header_and_summary_format():
    r = verify_paper("5", QQ, 4)
    lines = r.text().splitlines()
    assert lines[0] == f"# tamejet verification report v{REPORT_VERSION} section=5 field=Q jet=4"
    m = re.fullmatch(r"# summary pass=(\d+) fail=(\d+) skip=(\d+)", lines[-1])
    assert m and int(m.group(1)) == sum(c.status == "pass" for c in r.checks)
    for line in lines[1:-1]:
        cid, tag, status, residual, *_ = line.split("\t")
        assert status in {"pass", "fail", "skip"} and residual.startswith("residual=")


def test_ids_unique():
    r = verify_paper("all", QQ, 4)
    ids = [c.id for c in r.checks]
    assert len(ids) == len(set(ids))


@pytest.mark.parametrize("section", ["3", "4", "5"])
@pytest.mark.parametrize("jet", [4, 5])
def test_sections_pass_over_q(section, jet):
    r = verify_paper(section, QQ, jet)
    assert r.ok, "\n".join(c.line() for c in r.checks if c.status == "fail")
    assert not [c for c in r.checks if c.status == "skip"]


@pytest.mark.parametrize("field", [F3, F7])
def test_section5_positive_characteristic(field):
    r = verify_paper("5", field, 4)
    assert r.ok


def test_section3_f5():
    r = verify_paper("3", F5, 4)
    assert r.ok
    skipped = [c.id for c in r.checks if c.status == "skip"]
    assert skipped == ["s3.commutator-witness.k5m5"]


def test_char2_records_degeneracy():
    r = verify_paper("5", F2, 4)
    assert r.ok
    (c,) = r.by_id("s5.star-combination.char2")
    assert c.status == "pass" and "characteristic 2" in c.detail
    r4 = verify_paper("4", F2, 4)
    assert r4.ok
    assert all(c.status == "skip" for c in r4.by_id("s4.power-generation"))


def test_unsupported_monomials_over_f3_are_recorded():
    r = verify_paper("4", F3, 4)
    assert r.ok
    assert any(c.status == "skip" for c in r.by_id("s4.monomial-generation.unsupported"))


def test_suite_section5_matches_verify_paper():
    a = verify_suite_section5(4, QQ)
    b = verify_paper("5", QQ, 4)
    assert a.text() == b.text()


def test_deterministic_report():
    assert verify_paper("3", QQ, 4).text() == verify_paper("3", QQ, 4).text()


def test_bad_arguments():
    with pytest.raises(ValueError):
        verify_paper("9", QQ, 4)
    with pytest.raises(ValueError):
        verify_paper("5", QQ, 3)
