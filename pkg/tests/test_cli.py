import json

import pytest

from divdim.cli import main


def test_sieve(capsys):
    assert main(["sieve", "--limit", "100"]) == 0
    out = capsys.readouterr().out
    assert "pi(100) = 25" in out
    assert "97" in out


def test_sieve_json(capsys):
    assert main(["sieve", "--limit", "10", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["prime_count"] == 4


def test_exact_dim_divisibility(capsys):
    assert main(["exact-dim", "--divisibility", "8"]) == 0
    assert "dimension = 2" in capsys.readouterr().out


def test_exact_dim_with_primes_json(capsys):
    assert main(
        ["exact-dim", "--divisibility", "30", "--primes", "2,3,5", "--json"]
    ) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dimension"] == 3


def test_exact_dim_edges(tmp_path, capsys):
    edges = tmp_path / "edges.txt"
    edges.write_text("a < b\nc < b\n")
    assert main(["exact-dim", "--edges", str(edges)]) == 0
    assert "dimension = 2" in capsys.readouterr().out


def test_exact_dim_requires_one_source(capsys):
    assert main(["exact-dim"]) == 2


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_exact_dim_guard_exit_code():
    assert main(["exact-dim", "--divisibility", "100"]) == 3


def test_suitable(tmp_path, capsys):
    out = tmp_path / "s.json"
    code = main(
        ["suitable", "--n", "100", "--a", "7", "--b", "97", "--seed", "0",
         "--json", str(out)]
    )
    assert code == 0
    assert "verified" in capsys.readouterr().out
    data = json.loads(out.read_text())
    assert len(data["primes"]) == 21
    assert len(data["ranks"]) == 19


def test_coverfree_build_and_verify(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    assert main(
        ["coverfree", "build", "--q", "4", "--h", "1", "--verify", "3",
         "--json", str(fam)]
    ) == 0
    out = capsys.readouterr().out
    assert "16 sets" in out and "verified 3-cover-free" in out
    assert main(["coverfree", "verify", "--family", str(fam), "--r", "3"]) == 0
    # r too ambitious: q <= r h permits covering
    assert main(["coverfree", "verify", "--family", str(fam), "--r", "4"]) == 1


def test_coverfree_sampled(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    main(["coverfree", "build", "--q", "8", "--h", "1", "--json", str(fam)])
    capsys.readouterr()
    assert main(
        ["coverfree", "verify", "--family", str(fam), "--r", "7", "--sampled", "2000"]
    ) == 0
    assert "samples" in capsys.readouterr().out


def test_coverfree_non_prime_power(capsys):
    assert main(["coverfree", "build", "--q", "6", "--h", "1"]) == 2


def test_certify_verify_cycle(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert main(["certify", "--n", "150", "--seed", "3", "--out", str(cert)]) == 0
    assert main(["verify", "--cert", str(cert)]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_verify_mutated_certificate_fails(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["certify", "--n", "150", "--seed", "3", "--out", str(cert)])
    data = json.loads(cert.read_text())
    for zone in data["zones"]:
        if zone["kind"] == "random-suitable":
            zone["ranks"][0][0] ^= 1
            break
    cert.write_text(json.dumps(data))
    assert main(["verify", "--cert", str(cert)]) == 1
    err = capsys.readouterr().err
    assert "witness" in err


def test_verify_large_requires_sampled(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["certify", "--n", "2500", "--seed", "0", "--out", str(cert)])
    assert main(["verify", "--cert", str(cert)]) == 3
    capsys.readouterr()
    assert main(["verify", "--cert", str(cert), "--sampled", "3000"]) == 0


def test_bounds(capsys):
    assert main(["bounds", "--n", "1000,1000000"]) == 0
    out = capsys.readouterr().out
    assert "72.68" in out or "72.69" in out
    assert "o(1) dropped" in out


def test_bounds_json(capsys):
    assert main(["bounds", "--n", "100", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["n"] == 100


def test_usage_error_exit_code(capsys):
    assert main(["bounds", "--n", "2"]) == 2
    assert main(["no-such-command"]) == 2


def test_missing_file_exit_code(capsys):
    assert main(["verify", "--cert", "/nonexistent/cert.json"]) == 2


def test_verify_json_output(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    main(["certify", "--n", "60", "--seed", "0", "--out", str(cert)])
    capsys.readouterr()
    assert main(["verify", "--cert", str(cert), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] is True
    assert data["pairs_checked"] == 60 * 59


def test_inputs_beyond_word_cap_rejected(capsys):
    assert main(["sieve", "--limit", str(2**63)]) == 2
    assert main(["certify", "--n", str(2**63), "--out", "/tmp/x.json"]) == 2
