import json

from factorcalc.cli import main
from factorcalc.repl import DIAGNOSTIC, ENGINE, OK, Session, execute, repl_eval, run_script


def run(*lines, session=None):
    s = session or Session()
    return [repl_eval(line, s) for line in lines]


def test_fdim_and_nf():
    assert run(":fdim dsum(1/2: LF(2), 1/2: C) * LF(4)",
               ":nf dsum(1/2:LF(2),1/2:C)*LF(4)") == ["5", "LF(5)"]


def test_iso_commands():
    assert run(":iso LF(3)*LF(2) LF(5)") == ["isomorphic (1 step: FGF additivity)"]
    assert run(":iso LF(2) LF(3)", ":mode collapsed", ":iso LF(2) LF(3)") == [
        "not provable: LF(2) vs LF(3)", "mode collapsed", "isomorphic (2 steps: collapse)"]


def test_rescale_and_trades():
    out = run(":rescale Q1*Q2 1/2",
              ":trade sub(N, [1/2, Q1], [1/2, Q2]) Q1 1/4",
              ":tradeAll sub(N, [1/2, Q1], [1/2, Q2]) Q1=1/4, Q2#1=1/4")
    assert out == ["<- | Q1^1/4@1, Q2^1/4@1 | 3>",
                   "<N^1 | Q1^1/4@1/16, Q2^1@1/4 | 3/16>",
                   "<N^1 | Q1^1/4@1/16, Q2^1/4@1/16 | 3/8>"]


def test_errors_and_status():
    s = Session()
    r = execute(":trade sub(N, [1/2, Q]) Q 2", s)
    assert r.status == ENGINE and "deficit 15/4" in r.output
    r = execute(":nf dsum(1/2:C", s)
    assert r.status == DIAGNOSTIC and r.output.startswith("parse error at column 15")
    assert execute(":bogus", s).status == DIAGNOSTIC
    assert execute(":fdim Q", s).status == DIAGNOSTIC
    assert execute("# comment", s).status == OK


def test_failed_commands_leave_the_session_alone():
    s = Session()
    run(":nf LF(2)*LF(3)", session=s)
    before = (s.last, list(s.certificates), s.assumptions)
    execute(":rescale dsum(1/2: C, 1/2: C) 1/2", s)
    execute(":assume stable LF", s)
    assert (s.last, s.certificates, s.assumptions) == before


def test_explain_and_assume():
    s = Session()
    assert run(":explain", session=s) == ["no certificate yet"]
    run(":assume stable Q", ":iso Q Q*LF(inf)", session=s)
    assert "to-word" in run(":explain", session=s)[0]


def test_script_stops_at_quit_and_numbers_errors(tmp_path):
    s = Session()
    r = run_script("LF(2)\n:nf (\n:quit\n:nf LF(3)\n", s)
    assert r.output.splitlines()[0] == "LF(2)"
    assert r.output.splitlines()[1].startswith("line 2: parse error")
    assert "LF(3)" not in r.output and r.status == DIAGNOSTIC


def test_load_is_transactional(tmp_path):
    good = tmp_path / "good.fc"
    good.write_text(":mode collapsed\n:iso LF(2) LF(3)\n")
    bad = tmp_path / "bad.fc"
    bad.write_text(":mode collapsed\n:nf (\n")
    s = Session()
    assert execute(f":load {bad}", s).status == DIAGNOSTIC
    assert s.assumptions.mode == "distinct"
    assert execute(f":load {good}", s).output.endswith("isomorphic (2 steps: collapse)")
    assert s.assumptions.mode == "collapsed"


def test_cli_script_json_and_check(tmp_path, capsys):
    script = tmp_path / "demo.fc"
    script.write_text(":nf dsum(1/2:LF(2),1/2:C)*LF(4)\n"
                      ":iso sub(LF(2), fam(1/2,1/2,inf,LF(2))) LF(4)\n")
    out = tmp_path / "certs.json"
    assert main([str(script), "--json", str(out), "--check"]) == 0
    printed = capsys.readouterr().out
    assert "LF(5)" in printed and "replayed 2 certificate(s), 0 failed" in printed
    data = json.loads(out.read_text(encoding="utf-8"))
    assert [d["command"] for d in data][0] == "dsum(1/2:LF(2),1/2:C)*LF(4)"
    assert data[1]["certificate"]["verdict"] == "Isomorphic"


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.fc"
    bad.write_text(":nf (\n")
    assert main([str(bad)]) == 1
    worse = tmp_path / "worse.fc"
    worse.write_text(":trade sub(N, [1/2, Q]) Q 2\n")
    assert main([str(worse)]) == 2
    assert main([str(tmp_path / "missing.fc")]) == 1
    mode = tmp_path / "mode.fc"
    mode.write_text(":iso LF(2) LF(3)\n")
    assert main([str(mode), "--mode", "collapsed"]) == 0


def test_check_subcommand(tmp_path, capsys):
    assert main(["check", "--suite", "words", "--n", "50", "--seed", "3",
                 "--out", str(tmp_path)]) == 0
    assert "trade-invariance: pass (50 cases)" in capsys.readouterr().out
    assert main(["check", "--suite", "fdim", "--n", "0"]) == 0
