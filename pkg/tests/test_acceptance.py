"""Release acceptance: the eleven pinned end-to-end behaviors.

Each criterion gets one test and prints exactly one summary line, pass or
fail, with its wall time, so a release log can be read off the pytest
output directly. Criteria with a stated time budget assert it; the sizes
and tolerances here are the contract, not tunable knobs.
"""

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from click.testing import CliRunner

from cartier import (
    INF,
    PadicContext,
    SeriesKind,
    SeriesSpec,
    antecedent_chain,
    antecedent_step,
    build,
    dwork_congruence_check,
    integrality_check,
    kolchin_scan,
    logderiv_certificate,
    p_lucas_check,
    ratio_certificate,
)
from cartier.cli import main
from cartier.rational import Polynomial, RationalFunction
from cartier.series import TruncSeries

U2 = PadicContext.unramified(2)
U5 = PadicContext.unramified(5)
U7 = PadicContext.unramified(7)
D3 = PadicContext.dwork(3)

HALF = (Fraction(1, 2),)
GAUSS = (Fraction(1, 2), Fraction(1, 2))


@contextmanager
def criterion(capsys, num, label):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"[criterion {num:02d}] FAIL ({time.perf_counter() - t0:.2f}s) {label}")
        raise
    with capsys.disabled():
        print(f"[criterion {num:02d}] PASS ({time.perf_counter() - t0:.2f}s) {label}")


def series_of(kind, ctx, order, alphas=None):
    return build(SeriesSpec(kind, ctx, order, alphas=alphas)).series


def digit_sum(n, base):
    s = 0
    while n:
        s += n % base
        n //= base
    return s


def bessel_in_z(order):
    """The Bessel solution read as a plain rational series: pi^2 = -3 makes
    every coefficient rational, so the pi-component grid collapses to Q."""
    f = series_of(SeriesKind.BESSEL, D3, order)
    assert all(c.is_zero() for c in f.coeffs[1::2])
    ctx = PadicContext.unramified(3)
    return ctx, TruncSeries.from_coeffs(ctx, [c.parts[0] for c in f.coeffs])


def test_criterion_01_cartier_delta_commutation(capsys):
    with criterion(capsys, 1, "Cartier-delta commutation on 100 random series"):
        rng = random.Random(64)
        cases = []
        for p, count in ((3, 34), (5, 33), (7, 33)):
            ctx = PadicContext.unramified(p)
            for _ in range(count):
                coeffs = [
                    Fraction(rng.randrange(-999, 1000), rng.choice((1, 2, 3, 5, 8, 12)))
                    for _ in range(64)
                ]
                cases.append((p, TruncSeries.from_coeffs(ctx, coeffs)))
        t0 = time.perf_counter()
        for p, f in cases:
            assert f.delta().cartier() == f.cartier().delta() * p
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"commutation suite took {elapsed:.2f}s"


def test_criterion_02_catalog_cross_validation(capsys):
    with criterion(capsys, 2, "operator solutions match closed forms to order 120"):
        specs = [
            SeriesSpec(SeriesKind.APERY, U5, 120),
            SeriesSpec(SeriesKind.HYPERGEOMETRIC, U5, 120, alphas=GAUSS),
            SeriesSpec(SeriesKind.BESSEL, D3, 120),
            SeriesSpec(SeriesKind.EXPONENTIAL, D3, 120),
        ]
        t0 = time.perf_counter()
        for spec in specs:
            entry = build(spec)
            assert entry.operator.unit_solution(120) == entry.series, spec.kind
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"cross-validation took {elapsed:.2f}s"


def test_criterion_03_integrality_and_negative_control(capsys):
    with criterion(capsys, 3, "integrality to order 200, Bessel valuations, p=2 failure"):
        for p in (5, 7):
            ctx = PadicContext.unramified(p)
            assert series_of(SeriesKind.APERY, ctx, 200).min_valuation() >= 0
            assert series_of(
                SeriesKind.HYPERGEOMETRIC, ctx, 200, alphas=GAUSS
            ).min_valuation() >= 0
        bess = series_of(SeriesKind.BESSEL, D3, 200)
        for n in range(100):
            assert bess[2 * n].valuation() == 2 * digit_sum(n, 3)
            if 2 * n + 1 < 200:
                assert bess[2 * n + 1].is_zero()
        neg = series_of(SeriesKind.HYPERGEOMETRIC, U2, 8, alphas=HALF)
        report = integrality_check(neg, 1)
        assert not report.passed
        assert report.first_failure == 1


def test_criterion_04_dwork_congruences(capsys):
    with criterion(capsys, 4, "Dwork congruences for the Gauss series at p=5, s in {1,2}"):
        t0 = time.perf_counter()
        for s in (1, 2):
            f = series_of(SeriesKind.HYPERGEOMETRIC, U5, 5**s + 20, alphas=GAUSS)
            report = dwork_congruence_check(f, s)
            assert report.passed, report.to_json_dict()
            assert report.first_failure is None
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"Dwork checks took {elapsed:.2f}s"


def test_criterion_05_p_lucas(capsys):
    with criterion(capsys, 5, "p-Lucas for Apery to order p^3 - 1 at p in {5,7}"):
        t0 = time.perf_counter()
        for p in (5, 7):
            ctx = PadicContext.unramified(p)
            f = series_of(SeriesKind.APERY, ctx, p**3 - 1)
            report = p_lucas_check(f)
            assert report.passed, report.to_json_dict()
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"p-Lucas checks took {elapsed:.2f}s"


def test_criterion_06_antecedent_step(capsys):
    with criterion(capsys, 6, "one Frobenius antecedent step for the Gauss operator"):
        entry = build(SeriesSpec(SeriesKind.HYPERGEOMETRIC, U5, 40, alphas=GAUSS))
        step = antecedent_step(entry.operator, 40)
        assert step.level == 1
        assert step.residual.min_valuation() == INF  # identity holds exactly
        grid = step.passage.constant_matrix()
        assert [[grid[0][0], grid[0][1]], [grid[1][0], grid[1][1]]] == [[1, 0], [0, 5]]
        assert step.passage_min_valuation >= 0
        transformed = entry.series.cartier().truncate(step.operator.series_order)
        annihilated = step.operator.apply(transformed)
        assert annihilated.order >= 1
        assert all(c.is_zero() for c in annihilated.coeffs)


def test_criterion_07_antecedent_chain(capsys):
    with criterion(capsys, 7, "two-level antecedent chain for the Gauss operator"):
        entry = build(SeriesSpec(SeriesKind.HYPERGEOMETRIC, U5, 60, alphas=GAUSS))
        levels = antecedent_chain(entry.operator, 2, 60)
        assert [lvl.level for lvl in levels] == [1, 2]
        second = levels[1]
        grid = second.passage.constant_matrix()
        assert [[grid[0][0], grid[0][1]], [grid[1][0], grid[1][1]]] == [[1, 0], [0, 25]]
        assert second.residual.min_valuation() == INF
        assert second.passage_min_valuation >= 0


def test_criterion_08_certificates(capsys):
    with criterion(capsys, 8, "ratio and log-derivative certificates"):
        apery = series_of(SeriesKind.APERY, U5, 100)
        cert = ratio_certificate(apery, 1, 8)
        assert cert.rational.render() == {
            "num": ["1", "5", "73", "1445", "33001"],
            "den": ["1"],
        }
        assert cert.verified_order == 100
        assert cert.level == 1

        geom = TruncSeries.from_coeffs(U5, [1] * 40)
        # (1 - z^5)/(1 - z), in the engine's lowest-terms normal form
        expected = RationalFunction.make(
            Polynomial.from_coeffs(U5, [1, 0, 0, 0, 0, -1]),
            Polynomial.from_coeffs(U5, [1, -1]),
        )
        for m in (1, 2, 3):
            cert = ratio_certificate(geom, m, 8)
            assert cert.rational.key() == expected.key()
            assert cert.min_residual_valuation == INF

        exp = series_of(SeriesKind.EXPONENTIAL, D3, 30)
        cert = logderiv_certificate(exp, 1, 2, 4)
        assert cert.rational.render() == {"num": ["pi"], "den": ["1"]}
        assert cert.min_residual_valuation == INF

        half = series_of(SeriesKind.HYPERGEOMETRIC, U7, 30, alphas=HALF)
        cert = logderiv_certificate(half, 1, 2, 4)
        assert cert.rational.render() == {"num": ["1/2"], "den": ["1", "-1"]}
        assert cert.min_residual_valuation == INF


def test_criterion_09_scan_positive_controls(capsys):
    with criterion(capsys, 9, "dependence scan positive controls"):
        half = series_of(SeriesKind.HYPERGEOMETRIC, U7, 36, alphas=HALF)

        t0 = time.perf_counter()
        single = kolchin_scan([half], exp_bound=6, level=2, deg_bound=10)
        t_single = time.perf_counter() - t0
        assert [f.exponents for f in single.findings] == [(2,)]
        assert single.findings[0].product.rational.render() == {
            "num": ["1"],
            "den": ["1", "-1"],
        }
        assert t_single < 10.0, f"single-series scan took {t_single:.2f}s"

        t0 = time.perf_counter()
        doubled = kolchin_scan([half, half], exp_bound=6, level=2, deg_bound=10)
        t_doubled = time.perf_counter() - t0
        by_exps = {f.exponents: f for f in doubled.findings}
        assert (1, -1) in by_exps
        assert by_exps[(1, -1)].product.rational.render() == {"num": ["1"], "den": ["1"]}
        assert t_doubled < 10.0, f"duplicated-series scan took {t_doubled:.2f}s"

        t0 = time.perf_counter()
        derived = kolchin_scan(
            [half, half],
            exp_bound=6,
            level=2,
            deg_bound=10,
            derivative_orders=(0, 1),
        )
        t_derived = time.perf_counter() - t0
        by_exps = {f.exponents: f for f in derived.findings}
        # (3, -1) is the primitive representative of the ray through (-6, 2)
        assert (3, -1) in by_exps
        assert by_exps[(3, -1)].product.rational.render() == {"num": ["1"], "den": ["1"]}
        assert t_derived < 10.0, f"derivative scan took {t_derived:.2f}s"


def test_criterion_10_scan_negative_controls(capsys):
    with criterion(capsys, 10, "dependence scan negative controls, bounded evidence"):
        t0 = time.perf_counter()
        ctx3, bess_z = bessel_in_z(64)
        apery3 = series_of(SeriesKind.APERY, ctx3, 64)
        first = kolchin_scan([apery3, bess_z], exp_bound=2, level=3, deg_bound=16)
        assert first.findings == ()
        assert first.stats["tuples_tested"] == 12

        apery5 = series_of(SeriesKind.APERY, U5, 64)
        gauss = series_of(SeriesKind.HYPERGEOMETRIC, U5, 64, alphas=GAUSS)
        second = kolchin_scan([apery5, gauss], exp_bound=2, level=3, deg_bound=16)
        assert second.findings == ()
        assert second.stats["tuples_tested"] == 12
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"negative controls took {elapsed:.2f}s"


CLI_ACCEPTANCE_RUNS = [
    ["gen", "--series", "apery", "--prime", "5", "--order", "48"],
    ["check-integrality", "--series", "bessel", "--prime", "3", "--order", "64"],
    ["check-lucas", "--series", "apery", "--prime", "5", "--order", "124"],
    ["check-dwork", "--series", "hyp:1/2,1/2", "--prime", "5", "--s", "2", "--order", "45"],
    ["antecedent", "--series", "hyp:1/2,1/2", "--prime", "5", "--order", "40", "--levels", "1"],
    ["certify-ratio", "--series", "apery", "--prime", "5", "--order", "100", "--level", "1"],
    ["certify-logderiv", "--series", "exp", "--prime", "3", "--level", "2"],
    [
        "scan", "--series", "hyp:1/2", "--prime", "7", "--order", "36",
        "--exp-bound", "6", "--level", "2", "--deg-bound", "10",
    ],
]


def test_criterion_11_cli_determinism(capsys):
    with criterion(capsys, 11, "CLI runs byte-identical across two invocations"):
        runner = CliRunner()
        for args in CLI_ACCEPTANCE_RUNS:
            first = runner.invoke(main, args)
            second = runner.invoke(main, args)
            assert first.exit_code == 0, (args, first.output)
            assert second.exit_code == first.exit_code
            assert second.output == first.output, args
