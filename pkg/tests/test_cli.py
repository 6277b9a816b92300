import io
import sys

from dilatations import cli


def run_cli(tmp_path, text, *flags):
    path = tmp_path / "instance.dila"
    path.write_text(text, encoding="utf-8")
    captured = io.StringIO()
    old = sys.stdout
    sys.stdout = captured
    try:
        code = cli.main([str(path), *flags])
    finally:
        sys.stdout = old
    return code, captured.getvalue()


BASIC = """
ring A = QQ[a, g]
ideal M in A = (g)
center C on A = [M / a]
request present C
"""


def test_present_output_matches_worked_example(tmp_path):
    code, out = run_cli(tmp_path, BASIC)
    assert code == 0
    assert "relations: g - a*x_1_1" in out
    assert "zero_ring: false" in out


def test_machine_only_flag(tmp_path):
    code, out = run_cli(tmp_path, BASIC, "--machine-only")
    assert code == 0
    assert "== report ==" not in out
    keys = [line.split(":")[0] for line in out.strip().splitlines()]
    assert keys == sorted(keys)


def test_check_zero_ring_exit_zero(tmp_path):
    text = """
ring A = QQ[u]
rels A = (u^2)
ideal M in A = (u)
center C on A = [M / u]
request check C
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "zero_ring: true" in out


def test_iso_monopoly_pass(tmp_path):
    text = """
ring A = QQ[p, q, X, Y]
ideal MX in A = (X)
ideal MY in A = (Y)
center C on A = [MX / q], [MY / p]
request iso monopoly C
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "monopoly: pass" in out


def test_parse_error_nonprime(tmp_path):
    code, _ = run_cli(tmp_path, "ring A = Fp(6)[x]\n")
    assert code == 2


def test_parse_error_undeclared(tmp_path):
    code, _ = run_cli(tmp_path, "ring A = QQ[x]\ncenter C on A = [M / x]\n")
    assert code == 2


def test_verification_failure_exit_one(tmp_path):
    # open-immersion hypothesis failure is a reported FAIL clause
    text = """
ring A = QQ[a, g, h]
ideal M1 in A = (g)
ideal M2 in A = (h, a)
center C on A = [M1 / a], [M2 / a]
request iso open-immersion C K=1 map=2:1
"""
    code, out = run_cli(tmp_path, text)
    assert code == 1
    assert "fail" in out


def test_resource_limit_exit_three(tmp_path):
    text = """
ring A = QQ[x, y, z]
ideal M in A = (x^3 + y^3 + z^3, x*y*z - 1, x^2*y - z^2)
center C on A = [M / x]
request present C
"""
    code, _ = run_cli(tmp_path, text, "--degree-cap", "2")
    assert code == 3


def test_report_determinism(tmp_path):
    text = """
ring A = QQ[a, g]
ideal M in A = (g)
center C on A = [M / a]
elem b in A = a
request present C
request check C b
request iso localize C
request iso two-stage C K=1
"""
    out1 = run_cli(tmp_path, text, "--machine-only")
    out2 = run_cli(tmp_path, text, "--machine-only")
    assert out1 == out2
    # and under parallel execution
    out3 = run_cli(tmp_path, text, "--machine-only", "--jobs", "4")
    assert out1[1] == out3[1]


def test_hom_and_universal(tmp_path):
    text = """
ring A = QQ[a, g]
ring B = QQ[a]
ideal M in A = (g)
center C on A = [M / a]
hom chi : A -> B = (a, a^2)
request universal C chi
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "universal: pass" in out


def test_universal_refusal_reported_exit_zero(tmp_path):
    text = """
ring A = QQ[a, g]
ring B = QQ[a]
ideal M in A = (g)
center C on A = [M / a]
hom chi : A -> B = (a, 1)
request universal C chi
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "universal: refused" in out


def test_oracle_request(tmp_path):
    text = """
ring A = Fp(2)[y]
rels A = (y^3 - y)
ideal M in A = (y - 1)
center C on A = [M / y]
request oracle C
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "oracle: pass" in out


def test_congruence_requests(tmp_path):
    text = """
filtration FS = group GL(1), p=3, N=3, (e, 1)
filtration FR = group GL(1), p=3, N=3, (e, 2)
request congruence iso FS FR
request congruence points FS
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "congruence_iso: pass" in out
    assert "congruence_points.group_order: 9" in out


def test_rost_request(tmp_path):
    text = """
ring A = QQ[x, y]
ideal I in A = (x)
ideal J in A = (x, y)
request rost A I J bound=2
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "rost: pass" in out


def test_repeated_request_labels_disambiguated(tmp_path):
    text = """
ring A = QQ[a, g]
ideal M in A = (g)
center C on A = [M / a]
request present C
request present C
"""
    code, out = run_cli(tmp_path, text, "--machine-only")
    assert code == 0
    assert "relations#2:" in out


def test_iso_forget_and_conic_and_base_change(tmp_path):
    text = """
ring A = QQ[a, g]
ring B = QQ[a, g, w]
ideal M in A = (g)
ideal N in A = (a*g)
center C on A = [M / a], [N / a]
center D on A = [M / a]
hom ext : A -> B = (a, g)
request iso forget C K=1
request iso conic D
request iso base-change D ext
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "forget: pass" in out
    assert "conic: pass" in out
    assert "base_change: pass" in out


def test_universal_scan_request(tmp_path):
    text = """
ring A = Fp(2)[y]
rels A = (y^2 - y)
ideal M in A = (y)
center C on A = [M / y]
request universal C scan
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "universal_scan: pass" in out


def test_open_immersion_request_valid(tmp_path):
    text = """
ring A = QQ[a, g]
ideal M1 in A = (g)
ideal M2 in A = (g, a)
center C on A = [M1 / a], [M2 / g]
request iso open-immersion C K=1 map=2:1
"""
    code, out = run_cli(tmp_path, text)
    assert code == 0
    assert "open_immersion: pass" in out


def test_demo_instance_runs_clean():
    import pathlib
    import subprocess

    demo = pathlib.Path(__file__).resolve().parent.parent / "instances" / "demo.dila"
    proc = subprocess.run(
        [sys.executable, "-m", "dilatations.cli", str(demo), "--machine-only"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "monopoly: pass" in proc.stdout
    assert "rost: pass" in proc.stdout


def test_check_rejects_undeclared_element(tmp_path):
    text = """
ring A = QQ[a, g]
ideal M in A = (g)
center C on A = [M / a]
request check C nosuch
"""
    code, _ = run_cli(tmp_path, text)
    assert code == 2
