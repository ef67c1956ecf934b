import pytest

from catrit.bench import BenchReport, make_codec, run_bench, sweep
from catrit.cli import main
from catrit.codecs import codec_by_name
from catrit.index import load_raw, save_raw
from catrit.synthetic import clustered_index
from conftest import FIG2_POSTINGS


@pytest.fixture(scope="module")
def small_index():
    return clustered_index(nb_documents=4000, nb_words=60, seed=2)


def test_make_codec_options():
    c = make_codec("block-interp:padding=1,block_size=64")
    assert c.get_params() == {"block_size": 64, "padding": True, "redundant_max": False}
    with pytest.raises(ValueError):
        make_codec("interp:k=3")
    with pytest.raises(ValueError):
        make_codec("nope")


def test_bench_rows_verified_and_sorted(small_index):
    report = run_bench(small_index, ["gamma", "interp", "tca", "block-interp"])
    assert all(r.ok for r in report.rows)
    bpp = [r.bits_per_pointer for r in report.sorted_rows()]
    assert bpp == sorted(bpp)
    for r in report.rows:
        assert sum(r.sections.values()) == r.total_bits
        assert round(r.bits_per_pointer * r.nb_pointers) == r.total_bits


def test_bench_csv_round_trip(small_index):
    report = run_bench(small_index, ["interp", "delta"])
    again = BenchReport.from_csv(report.to_csv())
    assert again.to_csv() == report.to_csv()
    assert again.to_markdown().splitlines()[2:] != []


def test_failed_row_is_marked(small_index, monkeypatch):
    from catrit.codecs import baselines

    def broken(self, rd, nb_documents, nb_words, lengths):
        return [[1] * n for n in lengths]

    monkeypatch.setattr(baselines.InterpCodec, "_decode_body", broken)
    report = run_bench(small_index, ["interp", "gamma"])
    assert [r.codec for r in report.failed] == ["interp"]
    assert "FAILED" in report.to_markdown()


def test_sweep_single_point_equals_compress(small_index):
    r = sweep(small_index, "tc", k=[3], w=[2], k_init=[1])
    direct = codec_by_name("tc", k=3, w=2, k_init=1).fit_transform(small_index).total_bits
    assert r.best_bits == direct
    assert "automatic" in r.to_text()


def test_sweep_empty_grid(small_index):
    with pytest.raises(ValueError):
        sweep(small_index, "tc")


@pytest.fixture
def workdir(tmp_path):
    corpus = tmp_path / "corpus.txt"
    # one document per line, the words present in each document of the example index
    lines = [" ".join(f"w{i}" for i, docs in enumerate(FIG2_POSTINGS) if d in docs)
             for d in range(1, 17)]
    corpus.write_text("\n".join(lines) + "\n")
    return tmp_path


def test_build(workdir, capsys):
    assert main(["build", str(workdir / "corpus.txt"), str(workdir / "a.idx")]) == 0
    assert "nbPointers=18" in capsys.readouterr().out
    assert main(["build", str(workdir / "corpus.txt"), str(workdir / "b.idx")]) == 0
    assert (workdir / "a.idx").read_bytes() == (workdir / "b.idx").read_bytes()


def test_build_two_lines(tmp_path):
    (tmp_path / "c.txt").write_text("x y\ny\n")
    assert main(["build", str(tmp_path / "c.txt"), str(tmp_path / "c.idx")]) == 0
    assert load_raw(tmp_path / "c.idx").nb_documents == 2


def test_compress_verify_decompress(workdir, capsys):
    idx = workdir / "a.idx"
    main(["build", str(workdir / "corpus.txt"), str(idx)])
    out = workdir / "a.tca"
    assert main(["compress", str(idx), str(out), "--codec", "tca", "--verify"]) == 0
    assert "model=0" in capsys.readouterr().out
    assert main(["verify", str(idx), str(out)]) == 0
    assert main(["decompress", str(out), str(workdir / "back.idx")]) == 0
    assert (workdir / "back.idx").read_bytes() == idx.read_bytes()


def test_compress_flags(workdir):
    idx = workdir / "a.idx"
    main(["build", str(workdir / "corpus.txt"), str(idx)])
    perm = workdir / "perm.txt"
    perm.write_text("\n".join(str(17 - i) for i in range(1, 17)))
    args = ["compress", str(idx), str(workdir / "o"), "--perm", str(perm), "--sort-words"]
    assert main(args + ["--codec", "tc", "--k", "2", "--w", "2", "--kinit", "1",
                        "--norm-bits", "10", "--verify"]) == 0
    assert main(["verify", str(idx), str(workdir / "o"), "--perm", str(perm),
                 "--sort-words"]) == 0
    assert main(["verify", str(idx), str(workdir / "o")]) == 3
    assert main(args + ["--batch"]) == 0


def test_interp_not_larger_than_block_interp_via_cli(tmp_path, capsys):
    idx = tmp_path / "s.idx"
    save_raw(clustered_index(nb_documents=8000, nb_words=80, seed=0), idx)
    main(["compress", str(idx), str(tmp_path / "i"), "--codec", "interp"])
    main(["compress", str(idx), str(tmp_path / "b"), "--codec", "block-interp"])
    lines = capsys.readouterr().out.splitlines()
    totals = [int(line.split(": ")[1].split()[0]) for line in lines]
    assert totals[0] <= totals[1]


def test_bench_and_sweep_cli(tmp_path, capsys):
    idx = tmp_path / "s.idx"
    assert main(["gen-synthetic", str(idx), "--docs", "3000", "--words", "30",
                 "--seed", "4"]) == 0
    csv_path = tmp_path / "r.csv"
    assert main(["bench", str(idx), "--codec", "interp;tca;block-interp:padding=1",
                 "--csv", str(csv_path)]) == 0
    assert len(BenchReport.from_csv(csv_path.read_text()).rows) == 3
    assert main(["sweep", str(idx), "--codec", "tca", "--k", "1,2,3"]) == 0
    assert "grid best" in capsys.readouterr().out


def test_gen_synthetic_deterministic(tmp_path):
    for name in ("a", "b"):
        main(["gen-synthetic", str(tmp_path / name), "--docs", "2000", "--words", "20",
              "--seed", "7"])
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["compress"],
    ["sweep", "x.idx", "--k", "a,b"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_usage_error_codes(tmp_path):
    idx = tmp_path / "s.idx"
    save_raw(clustered_index(nb_documents=500, nb_words=5, seed=1), idx)
    assert main(["compress", str(idx), str(tmp_path / "o"), "--codec", "nope"]) == 1
    assert main(["compress", str(idx), str(tmp_path / "o"), "--codec", "gamma",
                 "--k", "3"]) == 1
    assert main(["sweep", str(idx)]) == 1


def test_data_error_codes(tmp_path):
    assert main(["compress", str(tmp_path / "missing"), str(tmp_path / "o")]) == 2
    (tmp_path / "junk").write_bytes(b"\x01\x02")
    assert main(["decompress", str(tmp_path / "junk"), str(tmp_path / "o")]) == 2
    (tmp_path / "empty.txt").write_text("")
    assert main(["build", str(tmp_path / "empty.txt"), str(tmp_path / "o")]) == 2
