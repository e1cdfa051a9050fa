//! Proof scripts: parsing, replay, reversal, mutation and bounded search.
//!
//! ```text
//! objects X Y Z
//! start W[X,Y×Z] . ^rho[X](W[Y,Z])
//! goal  Fa[X,Y,Z] . W[X×Y,Z] . W[X,Y]
//! step R5 -> at 0
//! step R1 <- at [2..2] with U[X]* . U[X]
//! ```

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::parse::{parse_position_at, parse_term_at};
use super::rules::{apply_rule, focus, has_inferred_backward, positions, Direction, RULES};
use super::term::{first_difference, fmt_position, normalize, typecheck, Term};
use crate::error::{Error, Result};

/// The shipped pentagon chase.
pub const PENTAGON: &str = include_str!("../../scripts/pentagon.script");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub direction: Direction,
    pub path: Vec<usize>,
    pub window: Option<(usize, usize)>,
    pub hint: Option<Term>,
}

impl Step {
    pub fn new(rule: &str, direction: Direction, path: &[usize], window: Option<(usize, usize)>) -> Self {
        Self { rule: rule.to_string(), direction, path: path.to_vec(), window, hint: None }
    }

    pub fn with_hint(mut self, hint: Term) -> Self {
        self.hint = Some(hint);
        self
    }

    pub fn position(&self) -> String {
        fmt_position(&self.path, self.window)
    }

    pub fn apply(&self, term: &Term) -> Result<Term> {
        apply_rule(term, &self.rule, &self.path, self.window, self.direction, self.hint.as_ref())
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} {} at {}", self.rule, self.direction, self.position())?;
        if let Some(h) = &self.hint {
            write!(f, " with {h}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub objects: BTreeSet<String>,
    pub start: Term,
    pub goal: Term,
    pub steps: Vec<Step>,
}

impl ProofScript {
    pub fn parse(text: &str) -> Result<Self> {
        let mut objects: Option<BTreeSet<String>> = None;
        let mut start = None;
        let mut goal = None;
        let mut steps = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim(), ""));
            let rest_col = indent + kw.len() + 1;
            let err = |column: usize, message: String| Error::Parse { line: line_no, column, message };
            match kw {
                "objects" => {
                    if objects.is_some() {
                        return Err(err(1, "objects declared twice".into()));
                    }
                    let set: BTreeSet<String> = rest.split_whitespace().map(String::from).collect();
                    if let Some(bad) = set.iter().find(|o| *o == "M" || !o.chars().all(|c| c.is_alphanumeric() || c == '_')) {
                        return Err(err(rest_col, format!("invalid object name {bad:?}")));
                    }
                    objects = Some(set);
                }
                "start" | "goal" => {
                    let decl = objects.as_ref().ok_or_else(|| err(1, "declare objects first".into()))?;
                    let t = parse_term_at(rest, Some(decl), line_no, rest_col)?;
                    typecheck(&t).map_err(|e| err(rest_col, e.to_string()))?;
                    if kw == "start" { start = Some(t) } else { goal = Some(t) }
                }
                "step" => {
                    let decl = objects.as_ref().ok_or_else(|| err(1, "declare objects first".into()))?;
                    steps.push(parse_step(rest, decl, line_no, rest_col)?);
                }
                other => return Err(err(indent + 1, format!("unknown directive {other:?}"))),
            }
        }
        let end = text.lines().count().max(1);
        let missing = |what: &str| Error::Parse { line: end, column: 1, message: format!("missing {what}") };
        let script = Self {
            objects: objects.ok_or_else(|| missing("objects"))?,
            start: start.ok_or_else(|| missing("start"))?,
            goal: goal.ok_or_else(|| missing("goal"))?,
            steps,
        };
        let (a, b) = (typecheck(&script.start)?, typecheck(&script.goal)?);
        if a != b {
            return Err(Error::Parse {
                line: end,
                column: 1,
                message: format!("start has type {} → {} but goal has {} → {}", a.0, a.1, b.0, b.1),
            });
        }
        Ok(script)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let objs: Vec<&str> = self.objects.iter().map(String::as_str).collect();
        s.push_str(&format!("objects {}\n", objs.join(" ")));
        s.push_str(&format!("start {}\n", self.start));
        s.push_str(&format!("goal {}\n", self.goal));
        for st in &self.steps {
            s.push_str(&format!("{st}\n"));
        }
        s
    }
}

fn parse_step(text: &str, objects: &BTreeSet<String>, line: usize, col0: usize) -> Result<Step> {
    let err = |offset: usize, message: String| Error::Parse { line, column: col0 + offset + 1, message };
    let mut words = text.split_whitespace();
    let rule = words.next().ok_or_else(|| err(0, "expected a rule name".into()))?;
    if !RULES.contains(&rule) {
        return Err(err(0, format!("unknown rule {rule:?}")));
    }
    let direction = match words.next() {
        Some("->") => Direction::Forward,
        Some("<-") => Direction::Backward,
        _ => return Err(err(rule.len(), "expected -> or <-".into())),
    };
    let after_dir = text.find(if direction == Direction::Forward { "->" } else { "<-" }).unwrap() + 2;
    let rest = &text[after_dir..];
    let rest_trim = rest.trim_start();
    let at_off = after_dir + rest.len() - rest_trim.len();
    let Some(pos_text) = rest_trim.strip_prefix("at") else {
        return Err(err(at_off, "expected 'at <position>'".into()));
    };
    let (pos_part, hint_part) = match pos_text.find(" with ") {
        Some(i) => (&pos_text[..i], Some(&pos_text[i + " with ".len()..])),
        None => (pos_text, None),
    };
    let (path, window) = parse_position_at(pos_part.trim(), line, col0 + at_off + 2 + (pos_part.len() - pos_part.trim_start().len()))?;
    let hint = match hint_part {
        Some(h) => {
            let off = col0 + at_off + 2 + pos_part.len() + " with ".len();
            Some(parse_term_at(h, Some(objects), line, off)?)
        }
        None => None,
    };
    Ok(Step { rule: rule.to_string(), direction, path, window, hint })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    /// `step` is 0-based; `step == steps.len()` means the replay ended on a
    /// term different from the goal.
    Stuck { step: usize, message: String },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proved => f.write_str("proved"),
            Verdict::Stuck { step, message } => write!(f, "stuck at step {}: {message}", step + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// `None` for the normalized start term.
    pub step: Option<String>,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub trace: Vec<TraceEntry>,
}

/// Replays every step from the normalized start term.
pub fn run_script(script: &ProofScript) -> RunResult {
    let mut term = normalize(&script.start);
    let goal = normalize(&script.goal);
    let mut trace = vec![TraceEntry { step: None, term: term.to_string() }];
    for (k, st) in script.steps.iter().enumerate() {
        match st.apply(&term) {
            Ok(next) => {
                term = next;
                trace.push(TraceEntry { step: Some(st.to_string()), term: term.to_string() });
            }
            Err(e) => {
                return RunResult { verdict: Verdict::Stuck { step: k, message: e.to_string() }, trace };
            }
        }
    }
    let verdict = match first_difference(&term, &goal) {
        None => Verdict::Proved,
        Some((path, got, want)) => Verdict::Stuck {
            step: script.steps.len(),
            message: format!(
                "final term differs from goal at {}: {got} vs {want}",
                fmt_position(&path, None)
            ),
        },
    };
    RunResult { verdict, trace }
}

/// Replays the steps and returns every intermediate term.
pub fn replay(start: &Term, steps: &[Step]) -> Result<Vec<Term>> {
    let mut terms = vec![normalize(start)];
    for st in steps {
        let next = st.apply(terms.last().unwrap())?;
        terms.push(next);
    }
    Ok(terms)
}

/// A single step taking `from` to `to` that undoes `st`.
fn invert_step(st: &Step, before: &Term, after: &Term) -> Option<Step> {
    let direction = st.direction.flip();
    let hint = match direction {
        Direction::Backward if !has_inferred_backward(&st.rule) => {
            Some(focus(before, &st.path, st.window).ok()?)
        }
        _ => None,
    };
    for (path, window) in positions(after, hint.is_some()) {
        let cand = Step { rule: st.rule.clone(), direction, path, window, hint: hint.clone() };
        if matches!(cand.apply(after), Ok(t) if t == *before) {
            return Some(cand);
        }
    }
    None
}

/// Steps that lead from the end of `steps` back to `start`.
pub fn reverse_steps(start: &Term, steps: &[Step]) -> Result<Vec<Step>> {
    let terms = replay(start, steps)?;
    let mut out = Vec::with_capacity(steps.len());
    for k in (0..steps.len()).rev() {
        let inv = invert_step(&steps[k], &terms[k], &terms[k + 1]).ok_or_else(|| {
            Error::RuleMismatch {
                rule: steps[k].rule.clone(),
                position: steps[k].position(),
                message: "no inverse step found".into(),
            }
        })?;
        out.push(inv);
    }
    Ok(out)
}

/// The script run in the opposite direction, from goal to start.
pub fn reverse_script(script: &ProofScript) -> Result<ProofScript> {
    Ok(ProofScript {
        objects: script.objects.clone(),
        start: script.goal.clone(),
        goal: script.start.clone(),
        steps: reverse_steps(&script.start, &script.steps)?,
    })
}

/// Single-step mutations of a script: flipped directions, shifted
/// positions and swapped rules. Mutants identical to the original are
/// skipped.
pub fn mutants(script: &ProofScript) -> Vec<(String, ProofScript)> {
    let mut out = Vec::new();
    let mut push = |label: String, k: usize, st: Step| {
        if st != script.steps[k] {
            let mut m = script.clone();
            m.steps[k] = st;
            out.push((label, m));
        }
    };
    for (k, st) in script.steps.iter().enumerate() {
        let mut flipped = st.clone();
        flipped.direction = st.direction.flip();
        push(format!("step {}: flip direction", k + 1), k, flipped);

        if let Some((i, j)) = st.window {
            let mut right = st.clone();
            right.window = Some((i + 1, j + 1));
            push(format!("step {}: shift window right", k + 1), k, right);
            if i > 0 {
                let mut left = st.clone();
                left.window = Some((i - 1, j - 1));
                push(format!("step {}: shift window left", k + 1), k, left);
            }
        } else if let Some(last) = st.path.last() {
            let mut next = st.clone();
            *next.path.last_mut().unwrap() = last + 1;
            push(format!("step {}: next sibling", k + 1), k, next);
        } else {
            let mut deeper = st.clone();
            deeper.path.push(0);
            push(format!("step {}: descend", k + 1), k, deeper);
        }

        let idx = RULES.iter().position(|r| *r == st.rule).unwrap_or(0);
        let mut swapped = st.clone();
        swapped.rule = RULES[(idx + 1) % RULES.len()].to_string();
        push(format!("step {}: swap rule to {}", k + 1, swapped.rule), k, swapped);
    }
    out
}

/// Breadth-first search over forward and inferred-backward steps, up to
/// `max_depth` (at most 6). Returns the first path found.
pub fn search(start: &Term, goal: &Term, max_depth: usize) -> Option<Vec<Step>> {
    let max_depth = max_depth.min(6);
    let start = normalize(start);
    let goal = normalize(goal);
    let mut seen: HashMap<Term, (Option<Term>, Option<Step>)> = HashMap::new();
    seen.insert(start.clone(), (None, None));
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((t, depth)) = queue.pop_front() {
        if t == goal {
            let mut steps = Vec::new();
            let mut cur = t;
            while let Some((Some(prev), Some(st))) = seen.get(&cur).cloned() {
                steps.push(st);
                cur = prev;
            }
            steps.reverse();
            return Some(steps);
        }
        if depth == max_depth {
            continue;
        }
        for (path, window) in positions(&t, false) {
            for rule in RULES {
                for direction in [Direction::Forward, Direction::Backward] {
                    if direction == Direction::Backward && !has_inferred_backward(rule) {
                        continue;
                    }
                    let st = Step::new(rule, direction, &path, window);
                    if let Ok(next) = st.apply(&t) {
                        if !seen.contains_key(&next) {
                            seen.insert(next.clone(), (Some(t.clone()), Some(st)));
                            queue.push_back((next, depth + 1));
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_script_with_equal_ends_is_proved() {
        let s = ProofScript::parse("objects X\nstart U[X] . U[X]*\ngoal U[X] . U[X]*\n").unwrap();
        assert!(run_script(&s).verdict.is_proved());
    }

    #[test]
    fn unmatched_end_is_stuck_after_last_step() {
        let s = ProofScript::parse("objects X Y\nstart U[X] . U[X]*\ngoal U[Y] . U[Y]*\n").unwrap();
        assert!(matches!(run_script(&s).verdict, Verdict::Stuck { step: 0, .. }));
    }

    #[test]
    fn small_script_and_its_reverse() {
        let text = "objects X Y\n\
                    start U[X] . U[X]* . W[X,Y]\n\
                    goal W[X,Y]\n\
                    step R1 -> at [0..2]\n";
        let s = ProofScript::parse(text).unwrap();
        assert_eq!(ProofScript::parse(&s.to_text()).unwrap(), s);
        let r = run_script(&s);
        assert!(r.verdict.is_proved(), "{}", r.verdict);
        assert_eq!(r.trace.len(), 2);
        let rev = reverse_script(&s).unwrap();
        assert!(run_script(&rev).verdict.is_proved());
        assert!(rev.steps[0].hint.is_some());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = ProofScript::parse("objects X\nstart U[Q]\ngoal U[X]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 9, .. }), "{e}");
        let e = ProofScript::parse("objects X\nstart U[X]\ngoal U[X]\nstep R99 -> at 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, column: 6, .. }), "{e}");
        assert!(ProofScript::parse("objects X\nstart U[X]\n").is_err());
        assert!(ProofScript::parse("objects X\nstart U[X]\ngoal U[X]*\n").is_err());
    }

    #[test]
    fn search_finds_short_lemma() {
        let start = crate::prover::parse_term("^rho[X](U[Y] . U[Y]*)", None).unwrap();
        let goal = crate::prover::parse_term("1[M]", None).unwrap();
        let steps = search(&start, &goal, 4).expect("lemma within depth 4");
        assert!(steps.len() <= 4);
        assert_eq!(replay(&start, &steps).unwrap().last().unwrap(), &normalize(&goal));
    }
}
