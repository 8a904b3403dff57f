import numpy as np
import pytest
from scipy import stats

from napsim.link import LinkConfig
from napsim.traces import (DecreasingTimestampError, MalformedLineError, Trace, TraceError,
                           TraceReadError, ZeroSpanError, format_trace, gen_poisson,
                           load_trace, occupancy_of, parse_trace, rate_for_occupancy,
                           save_trace, synthetic_trace)


def test_load_plain(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("0.0\n0.001\n0.002\n")
    tr = load_trace(p)
    assert len(tr) == 3
    assert np.allclose(np.diff(tr.arrivals), 1e-3)
    assert tr.sizes is None


def test_load_with_sizes_comments_and_crlf(tmp_path):
    p = tmp_path / "t.txt"
    p.write_bytes(b"# captured\r\n0.0 1000\r\n\r\n0.001 500\r\n")
    tr = load_trace(p)
    assert tr.sizes.tolist() == [1000, 500]


def test_decreasing_timestamp_reports_line(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("0.002\n0.001\n")
    with pytest.raises(DecreasingTimestampError) as info:
        load_trace(p)
    assert info.value.lineno == 2


@pytest.mark.parametrize("text,lineno", [("0.0\nabc\n", 2), ("0.0 1 2\n", 1),
                                         ("0.0 -5\n", 1), ("-1.0\n", 1), ("0.1 big\n", 1)])
def test_malformed_lines(text, lineno):
    with pytest.raises(MalformedLineError) as info:
        parse_trace(text)
    assert info.value.lineno == lineno


def test_mixed_size_columns_rejected():
    with pytest.raises(TraceError):
        parse_trace("0.0 100\n0.1\n")


def test_unreadable_file(tmp_path):
    with pytest.raises(TraceReadError):
        load_trace(tmp_path / "missing.txt")
    bad = tmp_path / "bin.txt"
    bad.write_bytes(b"\xff\xfe\x00")
    with pytest.raises(TraceReadError):
        load_trace(bad)


def test_error_classes_are_distinct():
    kinds = {TraceReadError, MalformedLineError, DecreasingTimestampError}
    assert len(kinds) == 3 and all(issubclass(k, TraceError) for k in kinds)


def test_trace_validation():
    with pytest.raises(TraceError):
        Trace([0.2, 0.1])
    with pytest.raises(TraceError):
        Trace([0.1, 0.2], sizes=[10])
    with pytest.raises(TraceError):
        Trace([0.1], sizes=[0])


@pytest.mark.parametrize("text", ["0.0\n0.001\n0.25\n", "0.0 1000\n0.5 64\n",
                                  "  1.5  \n2.5\n"])
def test_round_trip(tmp_path, text):
    tr = parse_trace(text)
    p = tmp_path / "t.txt"
    save_trace(tr, p)
    again = load_trace(p)
    assert again == tr
    assert format_trace(again, header=False).split() == text.split()


def test_gen_poisson_deterministic():
    a = gen_poisson(5000.0, 1.0, seed=7)
    b = gen_poisson(5000.0, 1.0, seed=7)
    assert format_trace(a) == format_trace(b)
    assert format_trace(a) != format_trace(gen_poisson(5000.0, 1.0, seed=8))


def test_gen_poisson_mean_gap():
    tr = gen_poisson(9000.0, 10.0, seed=42)
    gaps = np.diff(tr.arrivals)
    assert abs(gaps.mean() * 9000.0 - 1.0) < 0.03
    assert tr.arrivals[-1] < 10.0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_gen_poisson_exponential_gaps(seed):
    tr = gen_poisson(2000.0, 10.0, seed=seed)
    gaps = np.diff(tr.arrivals)
    assert gaps.size >= 10_000
    assert stats.kstest(gaps, "expon", args=(0, 1 / 2000.0)).pvalue > 0.01


def test_gen_poisson_rejects_bad_args():
    with pytest.raises(ValueError):
        gen_poisson(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        gen_poisson(1.0, 0.0, 1)


def test_synthetic_trace_hits_target_load():
    rate = rate_for_occupancy(0.072)
    assert rate == pytest.approx(9000.0)
    tr = synthetic_trace(0.072, 10.0, seed=42)
    assert occupancy_of(tr) == pytest.approx(0.072, rel=0.05)
    assert "rho=0.072" in tr.source


def test_occupancy_examples():
    tr = Trace(np.linspace(0.0, 1.0, 1000))
    assert occupancy_of(tr, LinkConfig()) == pytest.approx(0.008, rel=1e-12)
    n = 10_000
    sat = Trace(np.arange(n) * 8e-6)
    assert occupancy_of(sat) == pytest.approx(n / (n - 1), rel=1e-9)
    sized = Trace([0.0, 1.0], sizes=[500, 1500])
    assert occupancy_of(sized) == pytest.approx(16000 / 1e9)


def test_occupancy_zero_span():
    with pytest.raises(ZeroSpanError):
        occupancy_of(Trace([3.0]))
    with pytest.raises(ZeroSpanError):
        occupancy_of(Trace([]))
