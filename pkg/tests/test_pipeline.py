import json
import math

import pytest

from divdim.base import DomainError, ResourceLimitError
from divdim.divposets import DivPosetSpec, build_div_poset
from divdim.pipeline import (
    RealiserCertificate,
    bound_table,
    build_certificate,
    certificate_coordinates,
    plan,
    verify_certificate,
)
from divdim.posets import exact_dimension
from divdim.primes import sieve_primes

TABLE = sieve_primes(2000)


def cert_for(n, seed=0, eps=0.5):
    table = sieve_primes(max(n, 2))
    return build_certificate(plan(n, eps, table), seed, table), table


# --- planning -----------------------------------------------------------------


def test_plan_1000_small_zone():
    pl = plan(1000, 0.5, TABLE)
    assert pl.zones[0].kind == "chains"
    assert pl.zones[0].primes == (2, 3, 5, 7, 11, 13, 17, 19, 23)
    assert pl.interval_count == 2


def test_plan_small_limit_value():
    pl = plan(1000, 0.5, TABLE)
    ln = math.log(1000)
    assert pl.small_limit == pytest.approx(ln * ln / math.log(ln))


def test_plan_16_collapses_middle():
    pl = plan(16, 0.5, sieve_primes(16))
    kinds = [z.kind for z in pl.zones]
    assert kinds[0] == "chains"
    assert "cover-free" not in kinds  # B(16) < A(16), middle is empty


def test_plan_below_16_is_all_chains():
    pl = plan(12, 0.5, sieve_primes(12))
    assert [z.kind for z in pl.zones] == ["chains"]
    assert pl.zones[0].primes == (2, 3, 5, 7, 11)


def test_plan_n_equal_one_placeholder():
    pl = plan(1, 0.5, sieve_primes(2))
    assert pl.zones[0].primes == (2,)


@pytest.mark.parametrize("n", [16, 30, 100, 500, 1000, 1999])
def test_plan_partitions_primes(n):
    table = sieve_primes(n)
    pl = plan(n, 0.5, table)
    pl.validate_partition(table)
    seen = [p for z in pl.zones for p in z.primes]
    assert sorted(seen) == list(table.primes_in(0, n))


def test_plan_strategy_matches_boost_feasibility():
    pl = plan(1000, 0.5, TABLE)
    for z in pl.zones:
        if z.boost is not None:
            assert (z.kind == "cover-free") == z.boost.feasible


def test_plan_rejects_bad_arguments():
    with pytest.raises(DomainError):
        plan(0, 0.5, TABLE)
    with pytest.raises(DomainError):
        plan(100, 1.5, TABLE)
    with pytest.raises(DomainError):
        plan(5000, 0.5, TABLE)  # table too small


# --- building -----------------------------------------------------------------


def test_certificate_n2_single_chain():
    cert, _ = cert_for(2)
    assert cert.dimension == 1
    assert len(cert.zones) == 1
    assert cert.zones[0].kind == "chains"


def test_certificate_n1000_exercises_both_strategies():
    cert, _ = cert_for(1000)
    kinds = {z.kind for z in cert.zones}
    assert kinds == {"chains", "cover-free", "random-suitable"}
    assert cert.dimension == sum(z.dimension for z in cert.zones)


def test_certificate_coordinates_count_matches_dimension():
    cert, _ = cert_for(300)
    assert len(certificate_coordinates(cert)) == cert.dimension


def test_build_is_deterministic():
    a, _ = cert_for(400, seed=7)
    b, _ = cert_for(400, seed=7)
    assert a.dumps() == b.dumps()


def test_different_seeds_differ():
    a, _ = cert_for(400, seed=1)
    b, _ = cert_for(400, seed=2)
    assert a.dumps() != b.dumps()


def test_json_round_trip():
    cert, _ = cert_for(150)
    again = RealiserCertificate.loads(cert.dumps())
    assert again == cert


def test_malformed_certificate_rejected():
    with pytest.raises(DomainError):
        RealiserCertificate.loads("{}")
    with pytest.raises(DomainError):
        RealiserCertificate.loads("not json")


# --- verification ---------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 16, 60, 200])
def test_build_verify_roundtrip(n):
    cert, table = cert_for(n)
    report = verify_certificate(cert, table)
    assert report.ok
    assert report.pairs_checked == n * n - n


def test_verify_sampled_mode():
    cert, table = cert_for(300)
    report = verify_certificate(
        cert, table, mode="sampled", samples=5000, sample_seed=11
    )
    assert report.ok
    assert report.pairs_checked == 5000
    assert any("sampled" in note for note in report.notes)


def test_exhaustive_guard():
    cert, table = cert_for(60)
    big = RealiserCertificate(
        n=4000,
        eps=cert.eps,
        seed=cert.seed,
        max_exponent=11,
        dimension=cert.dimension,
        zones=cert.zones,
    )
    with pytest.raises(ResourceLimitError):
        verify_certificate(big, sieve_primes(4000))


def test_rank_mutation_caught():
    cert, table = cert_for(200)
    data = json.loads(cert.dumps())
    for zone in data["zones"]:
        if zone["kind"] == "random-suitable":
            zone["ranks"][0][0] ^= 1
            break
    mutated = RealiserCertificate.from_json_dict(data)
    report = verify_certificate(mutated, table)
    assert not report.ok
    assert report.integrity_failures


def test_sigma_mutation_caught():
    cert, table = cert_for(1000)
    data = json.loads(cert.dumps())
    for zone in data["zones"]:
        if zone["kind"] == "cover-free":
            zone["sigma_ranks"][5][1] ^= 1
            break
    mutated = RealiserCertificate.from_json_dict(data)
    report = verify_certificate(mutated, table)
    assert not report.ok
    assert report.integrity_failures


def test_functional_failure_without_integrity_check():
    # corrupt a rank into a non-permutation and skip integrity: the pair
    # phase itself must find a witness
    cert, table = cert_for(100)
    data = json.loads(cert.dumps())
    for zone in data["zones"]:
        if zone["kind"] == "random-suitable":
            row = zone["ranks"][0]
            row[0], row[-1] = row[-1], row[0]
            for other in zone["ranks"][1:]:
                other[:] = list(row)
            break
    mutated = RealiserCertificate.from_json_dict(data)
    report = verify_certificate(mutated, table, check_integrity=False)
    assert not report.ok
    assert report.pair_failures


def test_seed_mismatch_is_integrity_failure():
    cert, table = cert_for(200)
    data = json.loads(cert.dumps())
    for zone in data["zones"]:
        if zone["kind"] == "random-suitable":
            zone["zone_seed"] += 1
            break
    mutated = RealiserCertificate.from_json_dict(data)
    report = verify_certificate(mutated, table)
    assert not report.ok
    assert any("seed" in str(w) for w in report.integrity_failures)


def test_certificate_dimension_dominates_exact_dimension():
    for n in (6, 12, 16, 20):
        cert, _ = cert_for(n)
        poset = build_div_poset(
            DivPosetSpec(n, interval=(1, max(n, 2))), sieve_primes(max(n, 2))
        )
        assert cert.dimension >= exact_dimension(poset).dimension


# --- bound table ------------------------------------------------------------------


def test_bound_rows_at_million():
    (row,) = bound_table([10**6])
    ln = math.log(10**6)
    lln = math.log(ln)
    assert row.upper_two_zone == pytest.approx(ln * ln / lln, rel=1e-12)
    assert row.upper_two_zone == pytest.approx(72.6898, rel=1e-4)
    assert row.upper_three_zone == pytest.approx(154.2223, rel=1e-4)
    assert row.lower == pytest.approx(ln * ln / (16 * lln * lln), rel=1e-12)
    assert row.upper_coarse == pytest.approx(4 * ln * ln / lln, rel=1e-12)
    assert not row.degenerate
    assert "o(1) dropped" in row.note


def test_bound_table_includes_certificate_dimension():
    rows = bound_table([100, 1000], certificates={1000: 153})
    assert rows[0].certificate_dimension is None
    assert rows[1].certificate_dimension == 153


def test_bound_table_degenerate_boundary():
    (row,) = bound_table([15])  # below e^e
    assert row.degenerate
    assert row.middle_interval_count is None
    (row,) = bound_table([math.e**math.e])
    assert row.degenerate
    assert row.upper_three_zone == pytest.approx(0.0, abs=1e-9)


def test_bound_table_rejects_tiny_n():
    with pytest.raises(DomainError):
        bound_table([2])


def test_worker_count_does_not_change_results():
    cert, table = cert_for(300)
    one = verify_certificate(cert, table, workers=1)
    four = verify_certificate(cert, table, workers=4)
    assert one.ok and four.ok
    assert one.pair_failures == four.pair_failures
    assert one.pairs_checked == four.pairs_checked


def test_structurally_broken_certificates_rejected():
    cert, _ = cert_for(1000)
    base = json.loads(cert.dumps())

    def mutate(edit):
        data = json.loads(json.dumps(base))
        edit(data)
        with pytest.raises(DomainError):
            RealiserCertificate.from_json_dict(data)

    def short_rank_row(data):
        for z in data["zones"]:
            if z["kind"] == "random-suitable":
                z["ranks"][0].pop()
                return

    def ground_escape(data):
        for z in data["zones"]:
            if z["kind"] == "cover-free":
                z["family"][0][0] = z["ground_size"] + 5
                return

    def bad_phi(data):
        for z in data["zones"]:
            if z["kind"] == "cover-free":
                z["phi"][0] = 999
                return

    mutate(short_rank_row)
    mutate(ground_escape)
    mutate(bad_phi)
