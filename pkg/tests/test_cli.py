import subprocess
import sys

from grhopf import catalog
from grhopf.fileformat import format_presentation, parse_presentation


def write(tmp_path, name, h):
    path = tmp_path / f"{name}.hopf"
    path.write_text(format_presentation(h))
    return path


def test_check(cli, data, tmp_path):
    code, out, err = cli("check", data / "nococentral.hopf")
    assert code == 0 and "result: pass" in out and not err
    bad = tmp_path / "bad.hopf"
    bad.write_text("prime: 2\ngenerator: m degree=0 height=1\ngenerator: x degree=2 height=1\ndeltabar: x = x | m\n")
    code, out, _ = cli("check", bad)
    assert code == 4 and "result: fail" in out


def test_exit_codes_for_bad_files(cli, tmp_path):
    f = tmp_path / "a.hopf"
    f.write_text("prime: 2\ngenerator: x degree=2 height=1\ndeltabar: x = x | q\n")
    code, out, err = cli("check", f)
    assert code == 3 and not out and "line 3" in err
    f.write_text("prime: 2\ngenerator x\n")
    assert cli("check", f)[0] == 2
    assert cli("check", tmp_path / "missing.hopf")[0] == 2


def test_find_elementary_nococentral(cli, data, tmp_path):
    code, out, _ = cli("find-elementary", data / "nococentral.hopf")
    assert code == 0
    assert "cocentral: false" in out and "target: elementary degree=2" in out
    cert = tmp_path / "c.txt"
    cert.write_text(out)
    assert cli("verify", cert, data / "nococentral.hopf")[0] == 0


def test_conormal_oneyesoneno(cli, data, tmp_path):
    code, out, _ = cli("conormal", data / "oneyesoneno.hopf", "--kill", "m,y")
    assert code == 5 and "conormal: false" in out
    cert = tmp_path / "c.txt"
    cert.write_text(out)
    assert cli("verify", cert, data / "oneyesoneno.hopf")[0] == 0
    code, out, _ = cli("conormal", data / "oneyesoneno.hopf", "--kill", "m,x")
    assert code == 0 and out.rstrip().endswith("conormal: true")


def test_conormal_rejects_non_hopf_ideal(cli, data):
    code, out, _ = cli("conormal", data / "evenodd.hopf", "--kill", "x")
    assert code == 5 and "hopf_ideal: false" in out and "witness: x" in out


def test_verify_rejects_tampering(cli, data, tmp_path):
    _, out, _ = cli("find-elementary", data / "evenodd.hopf")
    cert = tmp_path / "c.txt"
    for old, new in [("cocentral: true", "cocentral: false"), ("chi: 0 0 1 0 0 0", "chi: 0 1 0 0 0 0"), ("dim: 2", "dim: 3")]:
        assert old in out
        cert.write_text(out.replace(old, new, 1))
        code, _, err = cli("verify", cert, data / "evenodd.hopf")
        assert code == 7 and "rejected" in err
    cert.write_text(out)
    assert cli("verify", cert, data / "nococentral.hopf")[0] == 7


def test_find_elementary_exit_6(cli, data, tmp_path):
    code, out, err = cli("find-elementary", data / "mu2.hopf")
    assert code == 6 and not out and "NoElementaryQuotient" in err
    ut = write(tmp_path, "ut", catalog.unitriangular((0, 0), 2, 2))
    code, _, err = cli("find-elementary", ut, "--positive-degree", "--strategy", "search")
    assert code == 6 and "NoPositiveDegreeQuotient" in err


def test_find_elementary_chain_certificate(cli, data, tmp_path):
    code, out, _ = cli("find-elementary", data / "evenodd.hopf", "--strategy", "chain")
    assert code == 0 and "strategy: chain" in out and "kind: embedding" in out
    cert = tmp_path / "c.txt"
    cert.write_text(out)
    assert cli("verify", cert, data / "evenodd.hopf")[0] == 0


def test_ut_chain_and_verify(cli, tmp_path):
    code, out, _ = cli("ut-chain", "--I", "0,1,2", "--r", "1", "--p", "2")
    assert code == 0
    assert [l.split(": ")[1] for l in out.splitlines() if l.startswith("generator:")] == ["x13", "x23", "x12"]
    cert = tmp_path / "u.txt"
    cert.write_text(out)
    _, pres, _ = cli("ut-presentation", "--I", "0,1,2", "--r", "1", "--p", "2")
    inp = tmp_path / "ut.hopf"
    inp.write_text(pres)
    assert cli("verify", cert, inp)[0] == 0
    inp.write_text(format_presentation(catalog.elementary(2, 1)))
    assert cli("verify", cert, inp)[0] == 7


def test_cohomology_example(cli, data):
    code, out, _ = cli("cohomology", data / "elementary_p3_d2.hopf", "--smax", "6")
    assert code == 0
    assert out == "0\t0\t1\n1\t2\t1\n2\t6\t1\n3\t8\t1\n4\t12\t1\n5\t14\t1\n6\t18\t1\n"


def test_cohomology_options(cli, data):
    f = data / "evenodd.hopf"
    _, base, _ = cli("cohomology", f, "--smax", "3", "--tmax", "8")
    _, minimal, _ = cli("cohomology", f, "--smax", "3", "--tmax", "8", "--method", "minimal")
    _, threaded, _ = cli("cohomology", f, "--smax", "3", "--tmax", "8", "--workers", "4")
    _, doubled, _ = cli("cohomology", f, "--smax", "3", "--tmax", "8", "--coeff-dim", "2")
    assert base == minimal == threaded
    assert doubled == "".join(f"{s}\t{t}\t{2 * int(d)}\n" for s, t, d in (l.split("\t") for l in base.splitlines()))


def test_dual_and_primitives(cli, data):
    code, out, _ = cli("dual", data / "nococentral.hopf")
    assert code == 0 and "basis: 1* m* x* (m*x)*" in out
    assert "mult: 1 2 3 1" in out
    code, out, _ = cli("primitives", data / "nococentral.hopf")
    assert out == "degree 0 (dim 1): m*\ndegree 2 (dim 1): x*\n"


def test_connectivize_and_frobenius_roundtrip(cli, data, tmp_path):
    code, out, _ = cli("connectivize", data / "oneyesoneno.hopf")
    assert code == 0 and format_presentation(parse_presentation(out)) == out
    ut = write(tmp_path, "ut", catalog.unitriangular((0, 0), 2, 2))
    code, out, _ = cli("frobenius", ut, "--r", "1")
    assert code == 0 and format_presentation(parse_presentation(out)) == out
    assert "height=1" in out


def test_products_restrict(cli, data):
    code, out, _ = cli("products", data / "elementary_p3_d2.hopf", "--smax", "3", "--tmax", "8")
    assert code == 0
    assert "product: (1,2)[0] * (1,2)[0] = -" in out and "verdict: spanned" in out
    code, out, _ = cli("restrict", data / "nococentral.hopf", "--kill", "m", "--smax", "4", "--tmax", "8")
    assert code == 0 and out.startswith("commutes_with_coboundary: true")
    assert out.count("cell:") == 3


def test_invariant_power_cli(cli, data):
    code, out, _ = cli("invariant-power", data / "mu2.hopf", "--module", data / "truncated_u4.rmod")
    assert code == 0 and out.startswith("N: 1\n") and "witness_at_N_minus_1: u" in out
    _, out, _ = cli("invariant-power", data / "mu2.hopf", "--module", data / "trivial_u4.rmod")
    assert out.startswith("N: 0\n")
    _, out, _ = cli("invariant-power", data / "mu2_height2.hopf", "--module", data / "truncated_u4.rmod")
    assert out.startswith("N: 2\n")


def test_module_entry_point(data):
    proc = subprocess.run(
        [sys.executable, "-m", "grhopf", "check", str(data / "evenodd.hopf")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "result: pass" in proc.stdout
