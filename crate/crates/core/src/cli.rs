//! The commands behind the `backdet` binary. Every command takes its inputs as
//! text and returns the produced artifact and a short report, so it can be
//! driven from tests without touching the file system.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alphabet::Alphabet;
use crate::backward::Bda;
use crate::dot::{h_graph_dot, waa_dot};
use crate::error::Error;
use crate::gen::{random_ltl, random_nba, random_weak_waa};
use crate::lasso::LassoWord;
use crate::ltl::{expand_propositions, ltl_eval_lasso, ltl_to_nutl, ltl_to_waa, Ltl};
use crate::nba::{build_rank_formulas, nba_acceptance, nba_to_bda, peel_ranks, Nba};
use crate::nutl::{dual_nutl, nutl_eval_lasso, nutl_to_waa, nutl_to_waa_optimized, parse_tuple_file, Evaluator, NutlAutomaton, NutlTuple};
use crate::run::{bda_final_run, cycle_census, waa_acceptance, waa_accepted_sets, BackwardRun};
use crate::waa::{StateId, Waa};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CHECK: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_COUNTEREXAMPLE: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownLetter(_) | Error::UnknownState(_) | Error::Invalid(_) => EXIT_PARSE,
            Error::NotWeak { .. } | Error::Check(_) | Error::MissingInitial => EXIT_CHECK,
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Determinism(_) => EXIT_COUNTEREXAMPLE,
        };
        Failure::new(code, e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    /// The file contents the command produces, empty for pure reports.
    pub artifact: String,
    pub report: String,
}

pub type CmdResult = Result<Output, Failure>;

/// Letters separated by spaces or commas.
pub fn parse_alphabet(text: &str) -> Result<Alphabet, Failure> {
    Ok(Alphabet::new(text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()))?)
}

fn bound_of(waa: &Waa) -> String {
    waa.state_space_bound()
        .map_or_else(|| waa.state_space_bound_string(), |b| b.to_string())
}

fn labelled(waa: &Waa, labels: &[String]) -> String {
    let mut out = String::new();
    for (q, label) in waa.states().zip(labels) {
        let _ = writeln!(out, "# {}: {}", waa.name(q), label);
    }
    out + &waa.to_text()
}

/// Without `props` the alphabet is `alphabet` or, if absent, the letters of
/// the formula. With `props` the formula is over atomic propositions and the
/// alphabet is the set of their valuations.
pub fn cmd_ltl2waa(formula: &str, alphabet: Option<&str>, props: Option<&str>) -> CmdResult {
    let (alphabet, phi) = match props {
        Some(p) => {
            let names: Vec<&str> = p.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            expand_propositions(formula, &names)?
        }
        None => {
            let alphabet = match alphabet {
                Some(a) => parse_alphabet(a)?,
                None => Alphabet::new(Ltl::letter_names(formula)?)?,
            };
            let phi = Ltl::parse(formula, &alphabet)?;
            (alphabet, phi)
        }
    };
    let waa = ltl_to_waa(&phi, &alphabet);
    let labels: Vec<String> = phi.subformulas().iter().map(|f| f.display(&alphabet).to_string()).collect();
    let kind = if waa.is_very_weak() { "very weak" } else { "weak" };
    Ok(Output {
        artifact: labelled(&waa, &labels),
        report: format!("{} states, {kind}, BDA bound {}", waa.num_states(), bound_of(&waa)),
    })
}

pub fn cmd_nutl2waa(tuple: &str, alphabet: Option<&str>, optimized: bool) -> CmdResult {
    let alphabet = alphabet.map(parse_alphabet).transpose()?;
    let t = parse_tuple_file(tuple, alphabet.as_ref())?;
    let aut = if optimized { nutl_to_waa_optimized(&t)? } else { nutl_to_waa(&t)? };
    let vars: usize = (0..t.num_blocks()).map(|b| t.block(crate::nutl::BlockId(b)).vars.len()).sum();
    let mut artifact = String::new();
    for (j, q) in aut.root_states.iter().enumerate() {
        let _ = writeln!(artifact, "# formula {j} -> {}", aut.waa.name(*q));
    }
    artifact += &labelled(&aut.waa, &aut.labels);
    Ok(Output {
        artifact,
        report: format!(
            "{} states, {} SCCs, {vars} fixed-point variables, BDA bound {}",
            aut.waa.num_states(),
            aut.waa.sccs().len(),
            bound_of(&aut.waa)
        ),
    })
}

pub fn cmd_nba2nutl(nba_text: &str) -> CmdResult {
    let nba = Nba::parse(nba_text)?;
    let f = build_rank_formulas(&nba);
    let t = &f.accepting;
    let vars: usize = (0..t.num_blocks()).map(|b| t.block(crate::nutl::BlockId(b)).vars.len()).sum();
    let mut artifact = String::new();
    for (j, name) in nba.state_names().iter().enumerate() {
        let _ = writeln!(artifact, "# formula {j}: accepted from {name}");
    }
    artifact += &t.to_file();
    Ok(Output {
        artifact,
        report: format!("{} fixed-point blocks, {vars} variables", t.num_blocks()),
    })
}

pub fn cmd_waa2bda(waa_text: &str, enumerate: Option<u64>) -> CmdResult {
    let waa = Waa::parse(waa_text)?;
    let bda = Bda::new(waa)?;
    let artifact = bda.export_text(enumerate)?;
    Ok(Output {
        artifact,
        report: format!(
            "{} families, {} Büchi sets",
            bound_of(bda.waa()),
            bda.num_buchi_sets()
        ),
    })
}

fn is_nba_text(text: &str) -> bool {
    text.lines().any(|l| l.trim_start().starts_with("trans "))
}

/// The lasso from the argument or, failing that, from a `# lasso:` line.
fn lasso_source<'a>(text: &'a str, lasso: Option<&'a str>) -> Result<&'a str, Failure> {
    lasso
        .or_else(|| text.lines().find_map(|l| l.trim().strip_prefix("# lasso:").map(str::trim)))
        .ok_or_else(|| Failure::new(EXIT_PARSE, "no lasso given"))
}

fn set_names(waa: &Waa, s: &BTreeSet<StateId>) -> String {
    format!("{{{}}}", s.iter().map(|q| waa.name(*q)).collect::<Vec<_>>().join(" "))
}

fn run_table(bda: &Bda, w: &LassoWord, run: &BackwardRun, extra: &mut dyn FnMut(usize, &BTreeSet<StateId>) -> String) -> String {
    let waa = bda.waa();
    let mut out = String::new();
    for (p, step) in run.steps.iter().enumerate() {
        let fired: Vec<String> = step.fired.iter().map(ToString::to_string).collect();
        let output = bda.output(&run.families[p]);
        let _ = writeln!(
            out,
            "{p:>3} {:<6} {:<24} fired [{}] output {} {}",
            waa.alphabet().name(w.letter(p)),
            run.families[p].display(waa).to_string(),
            fired.join(" "),
            set_names(waa, &output),
            extra(p, &output)
        );
    }
    out
}

/// Reports the final run on a weak automaton or, for an automaton with
/// `trans` lines, on the automaton produced from it. Disagreement with the
/// oracle is a counterexample.
pub fn cmd_run(text: &str, lasso: Option<&str>) -> CmdResult {
    let lasso = lasso_source(text, lasso)?;
    let mut report = String::new();
    let mut agree = true;
    if is_nba_text(text) {
        let nba = Nba::parse(text)?;
        let w = LassoWord::parse(lasso, nba.alphabet())?;
        let p = nba_to_bda(&nba, None)?;
        let run = bda_final_run(&p.bda, &w)?;
        let acc = nba_acceptance(&nba, &w);
        let _ = writeln!(report, "lasso {} ; {} automaton states", w.display(nba.alphabet()), p.bda.waa().num_states());
        let names = |s: &BTreeSet<usize>| {
            format!("{{{}}}", s.iter().map(|q| nba.state_names()[*q].as_str()).collect::<Vec<_>>().join(" "))
        };
        report += &run_table(&p.bda, &w, &run, &mut |pos, out| {
            let got = p.nba_states(out);
            let expected: BTreeSet<usize> = (0..nba.num_states()).filter(|&q| acc[pos][q]).collect();
            if got != expected {
                agree = false;
            }
            format!("accepting {} oracle {}", names(&got), names(&expected))
        });
    } else {
        let waa = Waa::parse(text)?;
        let w = LassoWord::parse(lasso, waa.alphabet())?;
        let bda = Bda::new(waa.clone())?;
        let run = bda_final_run(&bda, &w)?;
        let oracle = waa_accepted_sets(&waa, &w);
        let _ = writeln!(report, "lasso {}", w.display(waa.alphabet()));
        report += &run_table(&bda, &w, &run, &mut |pos, out| {
            if out != &oracle[pos] {
                agree = false;
            }
            format!("oracle {}", set_names(&waa, &oracle[pos]))
        });
    }
    if !agree {
        return Err(Failure::new(EXIT_COUNTEREXAMPLE, format!("{report}outputs differ from the oracle")));
    }
    Ok(Output {
        artifact: String::new(),
        report,
    })
}

pub fn cmd_dot(waa_text: &str, lasso: Option<&str>, cap: u64) -> CmdResult {
    let waa = Waa::parse(waa_text)?;
    let artifact = match lasso {
        None => waa_dot(&waa),
        Some(l) => {
            let w = LassoWord::parse(l, waa.alphabet())?;
            h_graph_dot(&Bda::new(waa)?, &w, cap)?
        }
    };
    Ok(Output {
        artifact,
        report: String::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Ltl,
    Nutl,
    Nba,
    Dual,
}

impl std::str::FromStr for CheckMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ltl" => Ok(CheckMode::Ltl),
            "nutl" => Ok(CheckMode::Nutl),
            "nba" => Ok(CheckMode::Nba),
            "dual" => Ok(CheckMode::Dual),
            _ => Err(format!("unknown mode `{s}`, expected ltl, nutl, nba or dual")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub mode: CheckMode,
    pub count: usize,
    pub seed: u64,
    pub max_prefix: usize,
    pub max_period: usize,
    /// Formula size for `ltl`/`nutl`, states for `nba`/`dual`.
    pub max_size: usize,
    /// Family cap for the full cycle census in `dual` mode.
    pub cap: u64,
    pub repro_dir: Option<PathBuf>,
}

impl CheckConfig {
    pub fn new(mode: CheckMode) -> Self {
        let (count, max_size) = match mode {
            CheckMode::Ltl => (200, 8),
            CheckMode::Nutl => (100, 8),
            CheckMode::Nba => (20, 2),
            CheckMode::Dual => (100, 5),
        };
        CheckConfig {
            mode,
            count,
            seed: 7,
            max_prefix: 2,
            max_period: 3,
            max_size,
            cap: 1 << 12,
            repro_dir: None,
        }
    }
}

/// A failed case: what went wrong and a file that replays it with `run`.
struct Counterexample {
    message: String,
    reproducer: String,
}

enum Case {
    Ltl(Ltl),
    Waa(Waa),
    Nba(Nba),
}

const CHECK_ALPHABET: [&str; 2] = ["a", "b"];

/// Random instances from the seed, checked in parallel against the oracles.
/// The report only depends on the configuration.
pub fn cmd_check(cfg: &CheckConfig) -> CmdResult {
    let alphabet = Alphabet::new(CHECK_ALPHABET).expect("valid alphabet");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: Vec<Case> = (0..cfg.count)
        .map(|_| match cfg.mode {
            CheckMode::Ltl | CheckMode::Nutl => Case::Ltl(random_ltl(&mut rng, &alphabet, cfg.max_size)),
            CheckMode::Dual => Case::Waa(random_weak_waa(&mut rng, &alphabet, cfg.max_size)),
            CheckMode::Nba => {
                let n = rng.gen_range(1..=cfg.max_size.max(1));
                Case::Nba(random_nba(&mut rng, &alphabet, n, 0.4))
            }
        })
        .collect();
    let lassos = LassoWord::enumerate(&alphabet, cfg.max_prefix, cfg.max_period);
    let results: Vec<Result<usize, Counterexample>> = cases
        .par_iter()
        .map(|case| check_case(cfg, &alphabet, case, &lassos))
        .collect();
    let mut runs = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(n) => runs += n,
            Err(cx) => {
                let mut message = format!("case {i}: {}", cx.message);
                if let Some(dir) = &cfg.repro_dir {
                    let path = dir.join(format!("repro-{:?}-{}-{i}.txt", cfg.mode, cfg.seed).to_lowercase());
                    write_reproducer(&path, &cx.reproducer)
                        .map_err(|e| Failure::new(EXIT_COUNTEREXAMPLE, format!("{message}; writing reproducer failed: {e}")))?;
                    let _ = write!(message, "; reproducer written to {}", path.display());
                }
                return Err(Failure::new(EXIT_COUNTEREXAMPLE, message));
            }
        }
    }
    Ok(Output {
        artifact: String::new(),
        report: format!(
            "check {:?}: {} cases, {} lassos each, {runs} runs, seed {}: pass",
            cfg.mode,
            cfg.count,
            lassos.len(),
            cfg.seed
        )
        .to_lowercase(),
    })
}

fn write_reproducer(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

fn repro(automaton: String, comment: &str, w: &LassoWord, alphabet: &Alphabet) -> String {
    format!("# {comment}\n# lasso: {}\n{automaton}", w.display(alphabet))
}

fn check_case(cfg: &CheckConfig, alphabet: &Alphabet, case: &Case, lassos: &[LassoWord]) -> Result<usize, Counterexample> {
    let fail = |message: String, reproducer: String| Counterexample { message, reproducer };
    let construction = |e: Error| fail(e.to_string(), String::new());
    match (cfg.mode, case) {
        (CheckMode::Ltl, Case::Ltl(phi)) => {
            let text = phi.display(alphabet).to_string();
            let waa = ltl_to_waa(phi, alphabet);
            let n = waa.num_states();
            if !waa.is_very_weak() || waa.state_space_bound() != Some(1 << n) {
                return Err(fail(format!("{text}: expected a very weak automaton with 2^{n} families"), waa.to_text()));
            }
            let bda = Bda::new(waa.clone()).map_err(construction)?;
            if bda.num_buchi_sets() != n {
                return Err(fail(format!("{text}: {} Büchi sets for {n} states", bda.num_buchi_sets()), waa.to_text()));
            }
            for w in lassos {
                let run = bda_final_run(&bda, w).map_err(|e| fail(format!("{text}: {e}"), repro(waa.to_text(), &text, w, alphabet)))?;
                let oracle = waa_accepted_sets(&waa, w);
                let truth = ltl_eval_lasso(phi, w);
                for (p, out) in run.outputs(&bda).iter().enumerate() {
                    if out != &oracle[p] || out.contains(&StateId(0)) != truth[p] {
                        return Err(fail(
                            format!("{text} on {} at position {p}: output {}, oracle {}", w.display(alphabet), set_names(&waa, out), set_names(&waa, &oracle[p])),
                            repro(waa.to_text(), &text, w, alphabet),
                        ));
                    }
                }
            }
            Ok(lassos.len())
        }
        (CheckMode::Nutl, Case::Ltl(phi)) => {
            let text = phi.display(alphabet).to_string();
            let mut t = NutlTuple::new(alphabet.clone());
            let root = ltl_to_nutl(phi, &mut t).map_err(construction)?;
            t.push_root(root);
            let dual = dual_nutl(&t);
            let aut: NutlAutomaton = nutl_to_waa(&t).map_err(construction)?;
            let bda = Bda::new(aut.waa.clone()).map_err(construction)?;
            let root_state = aut.root_states[0];
            for w in lassos {
                let truth = ltl_eval_lasso(phi, w);
                let sets = nutl_eval_lasso(&t, w).map_err(construction)?;
                let dual_sets = nutl_eval_lasso(&dual, w).map_err(construction)?;
                let run = bda_final_run(&bda, w).map_err(|e| fail(format!("{text}: {e}"), repro(aut.waa.to_text(), &text, w, alphabet)))?;
                let outs = run.outputs(&bda);
                for p in 0..w.len() {
                    let holds = sets[p].contains(&0);
                    if holds != truth[p] || dual_sets[p].contains(&0) == holds || outs[p].contains(&root_state) != holds {
                        return Err(fail(
                            format!("{} on {} at position {p}", t.display(root), w.display(alphabet)),
                            repro(aut.waa.to_text(), &t.display(root), w, alphabet),
                        ));
                    }
                }
            }
            Ok(lassos.len())
        }
        (CheckMode::Dual, Case::Waa(waa)) => {
            let dual = waa.dualize();
            let bda = Bda::new(waa.clone()).map_err(construction)?;
            let census = bda.state_space_size().is_some_and(|s| s <= cfg.cap);
            for w in lassos {
                let (x, y) = (waa_acceptance(waa, w), waa_acceptance(&dual, w));
                if x.iter().flatten().zip(y.iter().flatten()).any(|(a, b)| a == b) {
                    return Err(fail("acceptance and dual acceptance coincide".into(), repro(waa.to_text(), "dual", w, alphabet)));
                }
                if census {
                    let c = cycle_census(&bda, w, cfg.cap).map_err(construction)?;
                    if c.final_cycles.len() != 1 {
                        return Err(fail(
                            format!("{} final cycles of h on {}", c.final_cycles.len(), w.display(alphabet)),
                            repro(waa.to_text(), "uniqueness", w, alphabet),
                        ));
                    }
                }
                let run = bda_final_run(&bda, w).map_err(|e| fail(e.to_string(), repro(waa.to_text(), "final run", w, alphabet)))?;
                let oracle = waa_accepted_sets(waa, w);
                if run.outputs(&bda) != oracle {
                    return Err(fail("outputs differ from the oracle".into(), repro(waa.to_text(), "outputs", w, alphabet)));
                }
            }
            Ok(lassos.len())
        }
        (CheckMode::Nba, Case::Nba(nba)) => {
            let n = nba.num_states();
            let p = nba_to_bda(nba, None).map_err(construction)?;
            if p.automaton.waa.num_states() != 2 * n * n {
                return Err(fail(format!("{} automaton states for {n} NBA states", p.automaton.waa.num_states()), nba.to_text()));
            }
            let f = &p.formulas;
            for w in lassos {
                let ranks = peel_ranks(nba, w);
                if ranks.iter().any(|r| r.is_some_and(|r| r as usize >= 2 * n)) {
                    return Err(fail("rank out of range".into(), repro(nba.to_text(), "ranks", w, alphabet)));
                }
                let mut ev = Evaluator::new(&f.chi_tuple, w);
                for (i, row) in f.chi.iter().enumerate() {
                    for (j, &node) in row.iter().enumerate() {
                        let truth = ev.eval_closed(node).map_err(construction)?;
                        for (pos, t) in truth.into_iter().enumerate() {
                            if t != ranks.get(pos, j).is_some_and(|r| r as usize <= i) {
                                return Err(fail(
                                    format!("chi_{i}^{j} disagrees with the ranks at position {pos} of {}", w.display(alphabet)),
                                    repro(nba.to_text(), "rank formulas", w, alphabet),
                                ));
                            }
                        }
                    }
                }
                let acc = nba_acceptance(nba, w);
                let run = bda_final_run(&p.bda, w).map_err(|e| fail(e.to_string(), repro(nba.to_text(), "final run", w, alphabet)))?;
                for (pos, out) in run.outputs(&p.bda).iter().enumerate() {
                    let expected: BTreeSet<usize> = (0..n).filter(|&q| acc[pos][q]).collect();
                    if p.nba_states(out) != expected {
                        return Err(fail(
                            format!("outputs differ from acceptance at position {pos} of {}", w.display(alphabet)),
                            repro(nba.to_text(), "pipeline", w, alphabet),
                        ));
                    }
                }
            }
            Ok(lassos.len())
        }
        _ => unreachable!("cases are generated per mode"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ltl2waa_reports_bound() {
        let out = cmd_ltl2waa("F a", None, None).unwrap();
        assert_eq!(out.report, "2 states, very weak, BDA bound 4");
        assert!(Waa::parse(&out.artifact).is_ok());
        let out = cmd_ltl2waa("F a", Some("a b"), None).unwrap();
        assert!(out.artifact.contains("alphabet: a b"));
        let out = cmd_ltl2waa("G (p | q)", None, Some("p q")).unwrap();
        assert!(out.artifact.contains("alphabet: b00 b10 b01 b11"));
        assert_eq!(cmd_ltl2waa("!(F a)", None, None).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn nutl2waa_codes() {
        let out = cmd_nutl2waa("alphabet: a b\nnu_0 (X).(a & O X)\n", None, true).unwrap();
        assert!(out.report.starts_with("1 states, 1 SCCs, 1 fixed-point variables"), "{}", out.report);
        let err = cmd_nutl2waa("mu_0 (X).(X | a)\n", Some("a b"), false).unwrap_err();
        assert_eq!(err.code, EXIT_CHECK);
        assert_eq!(cmd_nutl2waa("mu_0 (X).(X |\n", Some("a b"), false).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn nba2nutl_block_count() {
        let out = cmd_nba2nutl("alphabet: a b\nstates: q0\ninitial: q0\nbuchi: q0\ntrans q0 a q0\n").unwrap();
        assert_eq!(out.report, "2 fixed-point blocks, 2 variables");
        let back = cmd_nutl2waa(&out.artifact, None, true).unwrap();
        assert!(back.report.starts_with("2 states"), "{}", back.report);
    }

    #[test]
    fn waa2bda_enumeration_and_cap() {
        let fa = "alphabet: a b\nstates: q\ndelta q = [a] | X q\n";
        let out = cmd_waa2bda(fa, Some(100)).unwrap();
        assert_eq!(out.report, "2 families, 1 Büchi sets");
        assert_eq!(out.artifact.matches("\nfamily ").count(), 2);
        let two = "alphabet: a\nstates: p q\ndelta p = X q\ndelta q = X p\n";
        let out = cmd_waa2bda(two, Some(100)).unwrap();
        assert_eq!(out.report, "9 families, 2 Büchi sets");
        let big: String = (0..20).map(|i| format!("delta q{i} = [a] | X q{i}\n")).collect();
        let states: Vec<String> = (0..20).map(|i| format!("q{i}")).collect();
        let big = format!("alphabet: a\nstates: {}\n{big}", states.join(" "));
        let err = cmd_waa2bda(&big, Some(10)).unwrap_err();
        assert_eq!(err.code, EXIT_CAP);
        assert!(err.message.contains("1048576"), "{}", err.message);
    }

    #[test]
    fn run_reports() {
        let fa = "alphabet: a b\nstates: q\ndelta q = [a] | X q\n";
        let out = cmd_run(fa, Some("; b")).unwrap();
        assert!(out.report.lines().skip(1).all(|l| l.contains("output {} oracle {}")), "{}", out.report);
        let out = cmd_run(fa, Some("b ; a b")).unwrap();
        assert!(out.report.lines().skip(1).all(|l| l.contains("output {q}")), "{}", out.report);
        let ga = "alphabet: a b\nstates: q\nrecurring: q\ndelta q = [a] & X q\n";
        let out = cmd_run(&format!("# lasso: ; a\n{ga}"), None).unwrap();
        assert!(out.report.contains("output {q}"));
        let nba = "alphabet: a b\nstates: q0\ninitial: q0\nbuchi: q0\ntrans q0 a q0\n";
        let out = cmd_run(nba, Some("; a")).unwrap();
        assert!(out.report.contains("accepting {q0} oracle {q0}"), "{}", out.report);
    }

    #[test]
    fn check_is_deterministic() {
        let mut cfg = CheckConfig::new(CheckMode::Dual);
        cfg.count = 10;
        let a = cmd_check(&cfg).unwrap();
        let b = cmd_check(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.report.ends_with("pass"));
    }
}
