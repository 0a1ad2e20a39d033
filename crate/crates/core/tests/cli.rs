use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use procsplit::semantics::{explore, DEFAULT_MAX_STATES};
use procsplit::{parse, Lts};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("procsplit-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.join(name);
        fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str], paths: &[&Path]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_procsplit"));
    cmd.args(args);
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_reports_syntax_errors_with_position() {
    let s = Scratch::new("check");
    let good = s.file("good.mcrl2", "P = a|b . c + d;\n");
    let bad = s.file("bad.mcrl2", "P = a . ;\n");
    let o = run(&["check"], &[&good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("root P"));
    let o = run(&["check"], &[&bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1:9"), "{}", stderr(&o));
}

#[test]
fn missing_file_and_usage_errors_exit_2() {
    let s = Scratch::new("usage");
    assert_eq!(run(&["check"], &[&s.path("missing")]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
    let p = s.file("p.mcrl2", "P = a;\n");
    assert_eq!(run(&["lts", "--proc", "Q"], &[&p]).status.code(), Some(2));
    assert_eq!(run(&["split", "--actions", "a", "--word", "3"], &[&p]).status.code(), Some(2));
}

#[test]
fn lts_writes_aldebaran() {
    let s = Scratch::new("lts");
    let p = s.file("fifo.mcrl2", "Fifo = a . b . Fifo;\n");
    let out = s.path("fifo.aut");
    let o = run(&["lts", "--proc", "Fifo", "--aut"], &[&out, &p]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "des (0, 2, 2)\n(0,\"a\",1)\n(1,\"b\",0)\n");
    let lts = Lts::from_aut(&text).unwrap();
    assert_eq!(lts.num_states, 2);
}

#[test]
fn bisim_exit_codes_follow_the_verdict() {
    let s = Scratch::new("bisim");
    let a = s.file("a.mcrl2", "P = a . (b + c);\n");
    let b = s.file("b.mcrl2", "Q = a . (c + b) + a . (b + c);\n");
    let c = s.file("c.mcrl2", "R = a . b + a . c;\n");
    let o = run(&["bisim"], &[&a, &b]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "bisimilar\n");
    let o = run(&["bisim"], &[&a, &c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: a -> "), "{}", stdout(&o));
}

#[test]
fn split_output_reparses_and_verifies() {
    let s = Scratch::new("split");
    let p = s.file("fifo.mcrl2", "Fifo = a . b . Fifo;\n");
    let out = s.path("split.mcrl2");
    let o = run(&["split", "--proc", "Fifo", "--actions", "a", "--verify", "-o"], &[&out, &p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "bisimilar\n");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("`Fifo#split#a#`"));
    let split = parse(&text).unwrap();
    assert_eq!(explore(&split, DEFAULT_MAX_STATES).unwrap().num_states, 2);
}

#[test]
fn frozen_split_is_rejected() {
    let s = Scratch::new("frozen");
    let p = s.file("p.mcrl2", "P = a . b + a . c;\n");
    let o = run(&["split", "--actions", "a", "--verify", "-o"], &[&s.path("o"), &p]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["split", "--actions", "a", "--freeze-words", "--verify", "-o"], &[&s.path("o"), &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not bisimilar\nwitness: "));
}

#[test]
fn reo_then_regions() {
    let s = Scratch::new("reo");
    let topo = s.file("chain.topo", "sync a -> b\nfifo b -> c\nsync c -> d\nboundary a, d\n");
    let spec = s.path("chain.mcrl2");
    let o = run(&["reo", "-o"], &[&spec, &topo]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["regions", "--proc", "Connector", "--topo"], &[&topo, &spec]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "synchronous regions:\na,b\nc,d\nasynchronous pairs:\nb -- c\n"
    );
}

#[test]
fn axioms_subcommand_runs() {
    let o = run(&["axioms", "--seed", "3", "--per-axiom", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("58 axioms, 0 failed, seed 3"));
}
