import numpy as np
import pytest

from mobiuswalk import seqgen


def mu_trial_division(m: int) -> int:
    """Independent oracle: factor by trial division."""
    if m == 1:
        return 1
    count = 0
    x = m
    d = 2
    while d * d <= x:
        if x % d == 0:
            x //= d
            count += 1
            if x % d == 0:
                return 0
        d += 1
    if x > 1:
        count += 1
    return (-1) ** count


def test_mobius_first_values():
    win = seqgen.mobius_range(1, 2)
    assert win.values.tolist() == [1]
    assert seqgen.mobius_range(30, 31).values.tolist() == [-1]  # 30 = 2*3*5
    assert seqgen.mobius_range(4, 5).values.tolist() == [0]
    assert seqgen.mobius_range(1, 12).values.tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1]


def test_mobius_against_trial_division():
    rng = np.random.default_rng(7)
    for lo, hi in [(1, 3000), (10 ** 6 - 500, 10 ** 6 + 500), (10 ** 9, 10 ** 9 + 2000)]:
        win = seqgen.mobius_range(lo, hi)
        for m in rng.integers(lo, hi, size=400):
            assert win.values[m - lo] == mu_trial_division(int(m)), m


def test_mobius_window_concatenation():
    a, b, c = 100, 5000, 12000
    left = seqgen.mobius_range(a, b).values
    right = seqgen.mobius_range(b, c).values
    full = seqgen.mobius_range(a, c).values
    assert np.array_equal(np.concatenate([left, right]), full)


def test_mobius_argument_errors():
    with pytest.raises(ValueError):
        seqgen.mobius_range(10, 10)
    with pytest.raises(ValueError):
        seqgen.mobius_range(0, 5)
    with pytest.raises(seqgen.SegmentBudgetError):
        seqgen.mobius_range(1, 2 + seqgen.MAX_WINDOW)


def test_squarefree_count():
    assert seqgen.squarefree_count(1) == 1
    assert seqgen.squarefree_count(10) == 7  # 1,2,3,5,6,7,10
    assert seqgen.squarefree_count(10 ** 6) == 607926
    # brute force cross-check on a small range
    brute = sum(1 for m in range(1, 2001) if mu_trial_division(m) != 0)
    assert seqgen.squarefree_count(2000) == brute


def test_squarefree_density_converges():
    for x in (10 ** 4, 10 ** 5, 10 ** 6):
        dens = seqgen.squarefree_count(x) / x
        assert abs(dens - 6 / np.pi ** 2) < 2 / np.sqrt(x)


def test_nth_squarefree():
    # first entries of the sequence: 1, 2, 3, 5, 6, 7, 10, 11, 13
    firsts = [seqgen.nth_squarefree(n) for n in range(1, 10)]
    assert firsts == [1, 2, 3, 5, 6, 7, 10, 11, 13]
    # largest square-free number not exceeding 1e6 (oracle: sieve scan;
    # 999998 = 2*31*127^2 and 999999 = 3^3*7*11*13*37 are both excluded)
    assert seqgen.nth_squarefree(607926) == 999997
    with pytest.raises(ValueError):
        seqgen.nth_squarefree(0)


def test_nth_squarefree_scaling():
    n = 10 ** 5
    assert abs(seqgen.nth_squarefree(n) / n - np.pi ** 2 / 6) < 0.01 * np.pi ** 2 / 6


def test_restricted_sequence_first_bits():
    seq = seqgen.restricted_sequence(1, 8)
    mu_hat = seq.slice_mu(1, 8)
    assert mu_hat.tolist() == [1, -1, -1, -1, 1, -1, 1, -1]
    bits = seq.slice_bits(1, 8)
    assert np.array_equal(bits, (mu_hat + 1) // 2)


def test_restricted_sequence_totality_and_mean():
    n = 10 ** 5
    seq = seqgen.restricted_sequence(1, n)
    bits = seq.slice_bits(1, n)
    assert bits.size == n
    assert set(np.unique(bits)) <= {0, 1}
    mean_mu = (2.0 * bits.sum() - n) / n
    assert abs(mean_mu) < 0.005


def test_restricted_sequence_offset_window():
    # windows must agree regardless of where the covering sieve started
    base = seqgen.restricted_sequence(1, 2000)
    sub = seqgen.restricted_sequence(1501, 300)
    assert np.array_equal(base.slice_bits(1501, 300), sub.slice_bits(1501, 300))


def test_sequence_file_roundtrip(tmp_path):
    seq = seqgen.restricted_sequence(1, 8)
    path = tmp_path / "tiny.msf"
    seqgen.write_sequence(seq, path)
    back = seqgen.read_sequence(path)
    assert back.start_ordinal == seq.start_ordinal
    assert back.length == seq.length
    assert np.array_equal(back.bits, seq.bits)


def test_sequence_file_layout(tmp_path):
    seq = seqgen.BitSequence.from_bits(1, np.array([1, 0, 1, 1, 0, 0, 1, 0, 1], dtype=np.uint8))
    path = tmp_path / "nine.msf"
    seqgen.write_sequence(seq, path)
    raw = path.read_bytes()
    assert raw[:4] == b"MSF1"
    assert int.from_bytes(raw[4:6], "little") == seqgen.FORMAT_VERSION
    assert int.from_bytes(raw[6:14], "little") == 1
    assert int.from_bytes(raw[14:22], "little") == 9
    payload = raw[22:]
    assert len(payload) == 2  # 9 bits -> 2 bytes
    assert payload[0] == 0b01001101  # LSB-first packing of 1,0,1,1,0,0,1,0
    assert payload[1] == 0b00000001  # last bit plus 7 zero pad bits


def test_sequence_file_errors(tmp_path):
    seq = seqgen.restricted_sequence(1, 8)
    path = tmp_path / "bad.msf"
    seqgen.write_sequence(seq, path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(seqgen.SequenceFormatError):
        seqgen.read_sequence(path)
    # truncated payload
    seqgen.write_sequence(seq, path)
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(seqgen.SequenceFormatError):
        seqgen.read_sequence(path)


def test_generate_sequence_file_matches_in_memory(tmp_path):
    path = tmp_path / "gen.msf"
    summary = seqgen.generate_sequence_file(path, 5, 3000)
    seq = seqgen.read_sequence(path)
    ref = seqgen.restricted_sequence(5, 3000)
    assert np.array_equal(seq.bits, ref.bits)
    assert summary["ones"] == int(ref.slice_bits(5, 3000).sum())


def test_slice_coverage_error():
    seq = seqgen.restricted_sequence(10, 50)
    with pytest.raises(ValueError):
        seq.slice_bits(9, 10)
    with pytest.raises(ValueError):
        seq.slice_bits(55, 10)
