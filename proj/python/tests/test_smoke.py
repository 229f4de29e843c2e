import json

import numpy as np
import pytest

import sonovib

FS = 44100


def tone(freq, seconds=1.0, amp=0.5, fs=FS):
    t = np.arange(int(seconds * fs)) / fs
    return amp * np.sin(2 * np.pi * freq * t)


def dominant(x, fs):
    spec = np.abs(np.fft.rfft(x * np.hanning(len(x))))
    return np.argmax(spec) * fs / len(x)


@pytest.mark.parametrize("algo", sonovib.ALGORITHMS)
def test_convert_outputs_8khz_in_range(algo):
    x = tone(440.0) + 0.01 * np.random.default_rng(0).standard_normal(FS)
    v = sonovib.convert(x, FS, algo)
    assert v.dtype == np.float64
    assert abs(len(v) / sonovib.VIBRATION_RATE - 1.0) < 0.1
    assert np.max(np.abs(v)) <= 1.0
    np.testing.assert_array_equal(v, sonovib.convert(x, FS, algo))


def test_fshift_halves_a_440_hz_tone():
    v = sonovib.convert(tone(440.0, 2.0), FS, "fshift")
    assert abs(dominant(v, 8000) - 220.0) <= 8000 / len(v)


def test_wav_round_trip(tmp_path):
    x = tone(1000.0, 0.25)
    sonovib.save_wav(tmp_path / "t.wav", x, FS)
    y, fs = sonovib.load_wav(tmp_path / "t.wav")
    assert fs == FS
    np.testing.assert_allclose(y, x, atol=1.0 / 32767)


def test_resample_keeps_the_tone():
    y = sonovib.resample(tone(1000.0), FS, 8000)
    assert len(y) == 8000
    assert abs(dominant(y, 8000) - 1000.0) <= 1.0


def test_features_vector():
    f = sonovib.extract_features(tone(440.0, 2.0), FS)
    assert abs(f["centroid_hz"] - 440.0) < 5.0
    assert int(np.argmax(f["chroma"])) == 9
    assert len(f["mfcc"]) == 13


def test_metrics_zero_on_identical_and_mse_matches_numpy():
    rng = np.random.default_rng(1)
    p, t = rng.uniform(-1, 1, 10), rng.uniform(-1, 1, 10)
    assert sonovib.reconstruction_metrics(p, p)["mse"] == 0.0
    assert sonovib.reconstruction_metrics(p, t)["mse"] == pytest.approx(np.mean((p - t) ** 2), rel=1e-12)


def test_blend_one_hot_and_envelope():
    rng = np.random.default_rng(2)
    refs = [rng.uniform(-1, 1, 256) for _ in range(4)]
    np.testing.assert_array_equal(sonovib.blend_targets(refs, [0, 0, 100, 0]), refs[2])
    out = sonovib.blend_targets(refs, [10, 20, 30, 40])
    stack = np.stack(refs)
    assert np.all(out >= stack.min(axis=0)) and np.all(out <= stack.max(axis=0))


def test_kmeans_and_allocation():
    rng = np.random.default_rng(3)
    centres = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    pts = np.concatenate([c + 0.05 * rng.standard_normal((30, 2)) for c in centres])
    r = sonovib.kmeans(pts, 3, 7)
    labels = np.array(r["assignment"])
    for block in range(3):
        assert len(set(labels[block * 30:(block + 1) * 30])) == 1
    assert len(set(labels)) == 3
    assert np.all(np.diff(r["objective_history"]) <= 0)
    assert sonovib.proportional_allocation([20, 12, 8], 20) == [10, 6, 4]


def test_augment_is_seeded():
    x = tone(300.0)
    np.testing.assert_array_equal(sonovib.augment(x, FS, 5), sonovib.augment(x, FS, 5))


def test_aggregate(tmp_path):
    (tmp_path / "r.csv").write_text(
        "clip_id,algorithm,rater_id,rating\n"
        "a,plm,r,10\na,fshift,r,20\na,pitch,r,90\na,hapticgen,r,30\n"
    )
    (tmp_path / "m.csv").write_text(
        "clip_id,path,class_id,class_name,category_id\na,a.wav,0,dog,1\n"
    )
    report = sonovib.aggregate(tmp_path / "r.csv", tmp_path / "m.csv", "clip")
    assert json.dumps(report)
    assert report["clip_wins"]["pitch"] == 1


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        sonovib.load_wav(tmp_path / "missing.wav")
    with pytest.raises(ValueError):
        sonovib.convert(tone(440.0), FS, "nonsense")
    with pytest.raises(RuntimeError):
        sonovib.convert(np.zeros(FS), FS, "fshift")
