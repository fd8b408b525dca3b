//! Clause storage and DIMACS CNF reading/writing.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::encoder::{AxiomInstance, VarMap};
use crate::error::Error;

/// A DIMACS literal: variable id (from 1) with sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        debug_assert!(var > 0);
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        debug_assert!(var > 0);
        Lit(-(var as i32))
    }

    pub fn from_dimacs(x: i32) -> Lit {
        debug_assert!(x != 0);
        Lit(x)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A contiguous run of clauses that together encode one axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGroup {
    pub instance: AxiomInstance,
    pub clauses: Range<usize>,
}

/// A CNF formula with clauses stored back to back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    lits: Vec<Lit>,
    starts: Vec<usize>,
    groups: Vec<ClauseGroup>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf {
            num_vars,
            lits: Vec::new(),
            starts: vec![0],
            groups: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn clause(&self, i: usize) -> &[Lit] {
        &self.lits[self.starts[i]..self.starts[i + 1]]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        (0..self.num_clauses()).map(move |i| self.clause(i))
    }

    pub fn groups(&self) -> &[ClauseGroup] {
        &self.groups
    }

    pub fn set_num_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    pub fn add_clause(&mut self, clause: &[Lit]) {
        for l in clause {
            self.num_vars = self.num_vars.max(l.var());
        }
        self.lits.extend_from_slice(clause);
        self.starts.push(self.lits.len());
    }

    /// Appends clauses as one group.
    pub fn add_group<'a>(&mut self, instance: AxiomInstance, clauses: impl IntoIterator<Item = &'a [Lit]>) {
        let first = self.num_clauses();
        for c in clauses {
            self.add_clause(c);
        }
        self.groups.push(ClauseGroup {
            instance,
            clauses: first..self.num_clauses(),
        });
    }

    /// Appends `other`'s clauses and groups, shifting group ranges.
    pub(crate) fn append(&mut self, other: Cnf) {
        let offset = self.num_clauses();
        for c in other.clauses() {
            self.lits.extend_from_slice(c);
            self.starts.push(self.lits.len());
        }
        self.num_vars = self.num_vars.max(other.num_vars);
        self.groups.extend(other.groups.into_iter().map(|g| ClauseGroup {
            instance: g.instance,
            clauses: g.clauses.start + offset..g.clauses.end + offset,
        }));
    }

    pub(crate) fn set_groups(&mut self, groups: Vec<ClauseGroup>) -> Result<(), Error> {
        for g in &groups {
            if g.clauses.end > self.num_clauses() || g.clauses.start > g.clauses.end {
                return Err(Error::Manifest(format!(
                    "group clause range {:?} exceeds {} clauses",
                    g.clauses,
                    self.num_clauses()
                )));
            }
        }
        self.groups = groups;
        Ok(())
    }

    /// The subformula made of the given groups' clauses, groups renumbered
    /// in the order given.
    pub fn restrict_to_groups(&self, group_ids: &[usize]) -> Cnf {
        let mut out = Cnf::new(self.num_vars);
        for &g in group_ids {
            let group = &self.groups[g];
            out.add_group(group.instance.clone(), group.clauses.clone().map(|i| self.clause(i)));
        }
        out.num_vars = self.num_vars;
        out
    }

    /// Writes standard DIMACS CNF. With a variable map, every variable gets a
    /// comment line naming the profile and committee it stands for.
    pub fn write_dimacs(&self, out: &mut impl Write, varmap: Option<&VarMap>) -> std::io::Result<()> {
        if let Some(vm) = varmap {
            for var in 1..=vm.len() as u32 {
                let (profile, committee) = vm.describe(var);
                writeln!(out, "c x{var} = f({profile}) == {committee}")?;
            }
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.num_clauses())?;
        let mut line = String::new();
        for c in self.clauses() {
            line.clear();
            for l in c {
                line.push_str(&l.0.to_string());
                line.push(' ');
            }
            line.push('0');
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_dimacs_string(&self, varmap: Option<&VarMap>) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf, varmap).expect("writing to memory");
        String::from_utf8(buf).expect("DIMACS is ASCII")
    }

    /// Parses DIMACS CNF. Comment lines are skipped; the clause count in the
    /// header must match.
    pub fn parse_dimacs(input: impl BufRead) -> Result<Cnf, Error> {
        let mut header: Option<(u32, usize)> = None;
        let mut cnf = Cnf::new(0);
        let mut current: Vec<Lit> = Vec::new();
        let mut last_line = 0;
        for (lineno, line) in input.lines().enumerate() {
            let lineno = lineno + 1;
            last_line = lineno;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            if trimmed.starts_with('%') {
                break;
            }
            if trimmed.starts_with('p') {
                if header.is_some() {
                    return Err(Error::Dimacs { line: lineno, msg: "duplicate header".into() });
                }
                let parts: Vec<&str> = trimmed.split_whitespace().collect();
                let parsed = match parts.as_slice() {
                    ["p", "cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                    _ => None,
                };
                let (v, c) = parsed.ok_or_else(|| Error::Dimacs {
                    line: lineno,
                    msg: format!("malformed header {trimmed:?}"),
                })?;
                if v > i32::MAX as u32 {
                    return Err(Error::Dimacs { line: lineno, msg: "too many variables".into() });
                }
                header = Some((v, c));
                cnf.num_vars = v;
                continue;
            }
            let (nv, _) = header.ok_or_else(|| Error::Dimacs {
                line: lineno,
                msg: "clause before header".into(),
            })?;
            for tok in trimmed.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| Error::Dimacs {
                    line: lineno,
                    msg: format!("invalid literal {tok:?}"),
                })?;
                if x == 0 {
                    cnf.lits.extend_from_slice(&current);
                    cnf.starts.push(cnf.lits.len());
                    current.clear();
                } else {
                    if x.unsigned_abs() > nv as u64 {
                        return Err(Error::Dimacs {
                            line: lineno,
                            msg: format!("literal {x} out of range for {nv} variables"),
                        });
                    }
                    current.push(Lit(x as i32));
                }
            }
        }
        let (_, nc) = header.ok_or_else(|| Error::Dimacs { line: last_line, msg: "missing header".into() })?;
        if !current.is_empty() {
            return Err(Error::Dimacs { line: last_line, msg: "unterminated clause".into() });
        }
        if cnf.num_clauses() != nc {
            return Err(Error::Dimacs {
                line: last_line,
                msg: format!("header declares {nc} clauses, found {}", cnf.num_clauses()),
            });
        }
        Ok(cnf)
    }

    pub fn parse_dimacs_str(s: &str) -> Result<Cnf, Error> {
        Self::parse_dimacs(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_clause() {
        let cnf = Cnf::parse_dimacs_str("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(cnf.num_vars(), 1);
        assert_eq!(cnf.num_clauses(), 1);
        assert_eq!(cnf.clause(0), &[Lit::pos(1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Cnf::parse_dimacs_str("p cnf x 1\n1 0\n"), Err(Error::Dimacs { line: 1, .. })));
        assert!(Cnf::parse_dimacs_str("p cnf 1\n").is_err());
        assert!(Cnf::parse_dimacs_str("p cnf 1 1\n2 0\n").is_err());
        assert!(Cnf::parse_dimacs_str("p cnf 2 1\n1 2\n").is_err());
        assert!(Cnf::parse_dimacs_str("1 0\n").is_err());
        assert!(Cnf::parse_dimacs_str("p cnf 2 2\n1 0\n").is_err());
        assert!(Cnf::parse_dimacs_str("p cnf 2 1\n1 a 0\n").is_err());
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = Cnf::parse_dimacs_str("c hello\np cnf 3 2\n1 -2\n3 0 -1 0\n").unwrap();
        assert_eq!(cnf.clause(0), &[Lit::pos(1), Lit::neg(2), Lit::pos(3)]);
        assert_eq!(cnf.clause(1), &[Lit::neg(1)]);
    }

    #[test]
    fn round_trip() {
        let mut cnf = Cnf::new(4);
        cnf.add_clause(&[Lit::pos(1), Lit::neg(4)]);
        cnf.add_clause(&[Lit::neg(2)]);
        cnf.add_clause(&[Lit::pos(3), Lit::pos(2), Lit::neg(1)]);
        let text = cnf.to_dimacs_string(None);
        assert!(text.starts_with("p cnf 4 3\n"));
        let back = Cnf::parse_dimacs_str(&text).unwrap();
        assert_eq!(back.clauses().collect::<Vec<_>>(), cnf.clauses().collect::<Vec<_>>());
        assert_eq!(back.num_vars(), 4);
    }
}
