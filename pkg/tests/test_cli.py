import io
import json
import math

import pytest

from mertens import zeta_int
from mertens.cli import main

LIM = ["--prime-limit", "1000"]


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_sums_json_value():
    code, text = run(
        ["sums", "--k", "2", "--s", "0", "--x", "6", "--method", "enum",
         "--format", "json"] + LIM
    )
    assert code == 0
    rows = json.loads(text)
    assert len(rows) == 1
    assert abs(rows[0]["value"] - 7 / 12) < 1e-12
    assert rows[0]["term_count"] == 3
    assert rows[0]["method"] == "enumerate"


def test_sums_json_round_trips_to_hi():
    code, text = run(
        ["sums", "--k", "2", "--x", "1000", "--method", "enum", "--format", "json"]
        + LIM
    )
    rows = json.loads(text)
    from mertens import SumSpec, build_sieve, sum_enumerate

    table = build_sieve(1000)
    ref = sum_enumerate(table, SumSpec(k=2, s=0, x=1000.0))
    assert rows[0]["value"] == ref.value.hi


def test_sums_csv_header_and_all_methods():
    code, text = run(
        ["sums", "--k", "2", "--x", "100", "--method", "all", "--format", "csv"] + LIM
    )
    lines = text.strip().splitlines()
    assert lines[0] == "x,k,s,method,value,term_count,prediction,residual"
    assert len(lines) == 4  # three methods
    values = {line.split(",")[3]: line.split(",")[4] for line in lines[1:]}
    assert set(values) == {"enumerate", "multiset", "hyperbola"}
    floats = [float(v) for v in values.values()]
    assert max(floats) - min(floats) < 1e-12


def test_sums_split_flag():
    code, text = run(
        ["sums", "--k", "2", "--x", "100", "--method", "hyperbola",
         "--split", "10", "--format", "json"] + LIM
    )
    rows = json.loads(text)
    ref_code, ref_text = run(
        ["sums", "--k", "2", "--x", "100", "--method", "enum", "--format", "json"]
        + LIM
    )
    ref = json.loads(ref_text)
    assert abs(rows[0]["value"] - ref[0]["value"]) < 1e-13


def test_poly_shifted_k3():
    code, text = run(["poly", "--k", "3", "--basis", "shifted", "--format", "csv"] + LIM)
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "k,basis,power,coeff"
    coeffs = [float(line.split(",")[3]) for line in lines[1:]]
    assert abs(coeffs[0] - 2.4041138) < 1e-6
    assert abs(coeffs[1] - (-4.9348022)) < 1e-6
    assert coeffs[2] == 0.0 and coeffs[3] == 1.0


def test_poly_plain_k1():
    code, text = run(["poly", "--k", "1", "--basis", "plain", "--format", "csv"] + LIM)
    coeffs = [float(line.split(",")[3]) for line in text.strip().splitlines()[1:]]
    assert abs(coeffs[0] - 0.26149721) < 1e-6  # constant term is B
    assert coeffs[1] == 1.0


def test_coeffs_csv():
    code, text = run(["coeffs", "--kmax", "4", "--format", "csv"] + LIM)
    lines = text.strip().splitlines()
    assert lines[0] == "k,a_k"
    a2 = float(lines[1].split(",")[1])
    assert abs(a2 + float(zeta_int(2))) < 1e-15


def test_specfun_zeta_json():
    code, text = run(["specfun", "zeta", "--n", "2", "--format", "json"] + LIM)
    doc = json.loads(text)
    assert doc["name"] == "zeta"
    assert doc["args"] == "n=2"
    assert float(doc["value"]) == zeta_int(2).hi
    assert doc["abs_error_bound"] < 1e-27


def test_specfun_gamma_table_mode():
    code, text = run(["specfun", "euler-gamma"] + LIM)
    assert code == 0
    assert text.startswith("euler-gamma = 5.7721566490153286")


def test_specfun_quad():
    code, text = run(
        ["specfun", "log-integral-quad", "--m", "2", "--tol", "1e-10",
         "--format", "json"] + LIM
    )
    doc = json.loads(text)
    assert abs(float(doc["value"]) - 0.189506008460255) < 1e-9
    assert doc["abs_error_bound"] == pytest.approx(1e-10)


def test_specfun_mertens_constant():
    code, text = run(
        ["specfun", "mertens-constant", "--limit", "10000", "--format", "json"]
        + ["--prime-limit", "10000"]
    )
    doc = json.loads(text)
    assert abs(float(doc["value"]) - 0.2614972) < 1e-4


def test_residuals_csv_header():
    code, text = run(
        ["residuals", "--k", "1", "--s", "0", "--xmin", "1000", "--xmax", "100000",
         "--points", "3", "--format", "csv", "--prime-limit", "100000"]
    )
    lines = text.strip().splitlines()
    assert lines[0] == "k,s,x,exact,prediction,residual,scaled"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "0"
    assert abs(float(first[2]) - 1000.0) < 1e-9


def test_verify_passes_and_is_deterministic():
    code1, text1 = run(["verify", "--threads", "1", "--prime-limit", "100000"])
    assert code1 == 0
    assert "verify: 20 checks, 20 passed" in text1
    code2, text2 = run(["verify", "--threads", "4", "--prime-limit", "100000"])
    assert text1 == text2


def test_verify_failure_exits_3(monkeypatch):
    import mertens.cli as cli_mod
    from mertens.xfloat import XFloat

    real = cli_mod.compute_sum

    def corrupted(table, spec, threads=1):
        sv = real(table, spec, threads)
        if spec.method.value == "multiset":
            return type(sv)(
                value=sv.value + XFloat(1e-3),
                term_count=sv.term_count,
                method=sv.method,
                spec=sv.spec,
            )
        return sv

    monkeypatch.setattr(cli_mod, "compute_sum", corrupted)
    code, text = run(["verify", "--prime-limit", "100000"])
    assert code == 3
    assert "FAIL" in text


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc_info:
        main(["sums", "--bogus-flag", "1"])
    assert exc_info.value.code == 2


def test_domain_error_exit_2(capsys):
    code, _ = run(["sums", "--k", "9", "--x", "10"] + LIM)
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_prime_cache_flag(tmp_path):
    cache = tmp_path / "primes.cache"
    code, _ = run(
        ["sums", "--k", "1", "--x", "500", "--prime-cache", str(cache)]
        + LIM
    )
    assert code == 0
    assert cache.exists()
    # reuse without error, values identical
    code2, text2 = run(
        ["sums", "--k", "1", "--x", "500", "--format", "json",
         "--prime-cache", str(cache)] + LIM
    )
    assert code2 == 0


def test_prime_cache_env(tmp_path, monkeypatch):
    cache = tmp_path / "env.cache"
    monkeypatch.setenv("MERTENS_PRIME_CACHE", str(cache))
    code, _ = run(["sums", "--k", "1", "--x", "500"] + LIM)
    assert code == 0
    assert cache.exists()


def test_threads_auto():
    code, text = run(
        ["sums", "--k", "2", "--x", "1000", "--threads", "auto", "--format", "json"]
        + LIM
    )
    assert code == 0
    ref_code, ref_text = run(
        ["sums", "--k", "2", "--x", "1000", "--threads", "1", "--format", "json"]
        + LIM
    )
    assert text == ref_text


def test_byte_stability_across_runs():
    argv = ["sums", "--k", "3", "--x", "5000", "--method", "all",
            "--format", "csv", "--prime-limit", "10000"]
    _, a = run(argv)
    _, b = run(argv)
    assert a == b
