//! Diagram syntax: generators, sequential and parallel composition, and
//! symbolic phase expressions over named angle variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::angle::Angle;
use crate::ZxError;

/// Integer-linear combination of angle variables plus a constant offset.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleExpr {
    pub constant: Angle,
    /// variable name -> integer coefficient; zero coefficients are not stored.
    pub terms: BTreeMap<String, i64>,
}

impl AngleExpr {
    pub fn zero() -> AngleExpr {
        AngleExpr { constant: Angle::ZERO, terms: BTreeMap::new() }
    }

    pub fn constant(a: Angle) -> AngleExpr {
        AngleExpr { constant: a, terms: BTreeMap::new() }
    }

    pub fn variable(name: &str) -> AngleExpr {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_owned(), 1);
        AngleExpr { constant: Angle::ZERO, terms }
    }

    pub fn add(&self, other: &AngleExpr) -> AngleExpr {
        let mut terms = self.terms.clone();
        for (v, c) in &other.terms {
            let e = terms.entry(v.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                terms.remove(v);
            }
        }
        AngleExpr { constant: self.constant.add(&other.constant), terms }
    }

    pub fn neg(&self) -> AngleExpr {
        AngleExpr {
            constant: self.constant.neg(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &AngleExpr) -> AngleExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> AngleExpr {
        if k == 0 {
            return AngleExpr::zero();
        }
        AngleExpr {
            constant: self.constant.scale(k),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Angle> {
        if self.terms.is_empty() {
            Some(&self.constant)
        } else {
            None
        }
    }

    pub fn collect_vars(&self, into: &mut BTreeSet<String>) {
        for v in self.terms.keys() {
            into.insert(v.clone());
        }
    }

    /// Evaluates the expression under a full assignment of its variables.
    pub fn substitute(&self, bindings: &BTreeMap<String, Angle>) -> Result<Angle, ZxError> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            let val = bindings
                .get(v)
                .ok_or_else(|| ZxError::UnboundVariable { name: v.clone() })?;
            acc = acc.add(&val.scale(*c));
        }
        Ok(acc)
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (v, c) in &self.terms {
            if wrote {
                write!(f, "{}", if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
            wrote = true;
        }
        let zero_const = matches!(&self.constant, Angle::Rational(r) if r.is_zero());
        if !wrote {
            write!(f, "{}", self.constant)
        } else if !zero_const {
            write!(f, " + {}", self.constant)
        } else {
            Ok(())
        }
    }
}

/// Atomic diagram pieces. Wire counts are (inputs, outputs).
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Z { inputs: usize, outputs: usize, phase: AngleExpr },
    X { inputs: usize, outputs: usize, phase: AngleExpr },
    /// Hadamard, 1 -> 1.
    H,
    /// Bent wire consuming two inputs, 2 -> 0.
    Cup,
    /// Bent wire producing two outputs, 0 -> 2.
    Cap,
    /// Wire crossing, 2 -> 2.
    Swap,
    /// Straight wire, 1 -> 1.
    Id,
    /// Triangle node, 1 -> 1.
    Triangle,
    /// Empty diagram, 0 -> 0; interprets as the scalar 1.
    Empty,
}

impl Generator {
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Generator::Z { inputs, outputs, .. } | Generator::X { inputs, outputs, .. } => {
                (*inputs, *outputs)
            }
            Generator::H | Generator::Id | Generator::Triangle => (1, 1),
            Generator::Cup => (2, 0),
            Generator::Cap => (0, 2),
            Generator::Swap => (2, 2),
            Generator::Empty => (0, 0),
        }
    }
}

/// A diagram term: a generator, a sequential chain, or a parallel stack.
///
/// `seq(a, b)` wires the outputs of `a` into the inputs of `b`; `par(a, b)`
/// stacks `a` above `b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagram {
    Gen(Generator),
    Seq(Vec<Diagram>),
    Par(Vec<Diagram>),
}

impl Diagram {
    pub fn z(inputs: usize, outputs: usize, phase: AngleExpr) -> Diagram {
        Diagram::Gen(Generator::Z { inputs, outputs, phase })
    }

    pub fn x(inputs: usize, outputs: usize, phase: AngleExpr) -> Diagram {
        Diagram::Gen(Generator::X { inputs, outputs, phase })
    }

    pub fn seq(parts: Vec<Diagram>) -> Diagram {
        Diagram::Seq(parts)
    }

    pub fn par(parts: Vec<Diagram>) -> Diagram {
        Diagram::Par(parts)
    }

    /// Wire counts (inputs, outputs), assuming the term is well formed.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Diagram::Gen(g) => g.arity(),
            Diagram::Seq(parts) => {
                let first = parts.first().map_or(0, |d| d.arity().0);
                let last = parts.last().map_or(0, |d| d.arity().1);
                (first, last)
            }
            Diagram::Par(parts) => parts
                .iter()
                .map(|d| d.arity())
                .fold((0, 0), |(i, o), (di, dout)| (i + di, o + dout)),
        }
    }

    /// Checks structural well-formedness: every sequential joint must have
    /// matching wire counts, and compositions must be nonempty.
    pub fn validate(&self) -> Result<(), ZxError> {
        self.validate_at("root")
    }

    fn validate_at(&self, path: &str) -> Result<(), ZxError> {
        match self {
            Diagram::Gen(_) => Ok(()),
            Diagram::Seq(parts) => {
                if parts.is_empty() {
                    return Err(ZxError::Invalid(format!("{path}: empty seq")));
                }
                for (i, d) in parts.iter().enumerate() {
                    d.validate_at(&format!("{path}.seq[{i}]"))?;
                }
                for (i, w) in parts.windows(2).enumerate() {
                    let upper = w[0].arity().1;
                    let lower = w[1].arity().0;
                    if upper != lower {
                        return Err(ZxError::ArityMismatch {
                            path: format!("{path}.seq[{}]", i + 1),
                            upper: upper as u32,
                            lower: lower as u32,
                        });
                    }
                }
                Ok(())
            }
            Diagram::Par(parts) => {
                if parts.is_empty() {
                    return Err(ZxError::Invalid(format!("{path}: empty par")));
                }
                for (i, d) in parts.iter().enumerate() {
                    d.validate_at(&format!("{path}.par[{i}]"))?;
                }
                Ok(())
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, into: &mut BTreeSet<String>) {
        match self {
            Diagram::Gen(Generator::Z { phase, .. }) | Diagram::Gen(Generator::X { phase, .. }) => {
                phase.collect_vars(into)
            }
            Diagram::Gen(_) => {}
            Diagram::Seq(parts) | Diagram::Par(parts) => {
                for d in parts {
                    d.collect_vars(into);
                }
            }
        }
    }

    /// Replaces every variable by its bound value, yielding a concrete
    /// diagram. Fails if any variable in the diagram lacks a binding.
    pub fn substitute(&self, bindings: &BTreeMap<String, Angle>) -> Result<Diagram, ZxError> {
        self.map_phases(&mut |e| Ok(AngleExpr::constant(e.substitute(bindings)?)))
    }

    /// Multiplies every phase expression by `k`. Intended for concrete
    /// diagrams, where it scales each angle modulo a full turn.
    pub fn scale_angles(&self, k: i64) -> Diagram {
        self.map_phases(&mut |e| Ok(e.scale(k))).expect("scaling is total")
    }

    fn map_phases(
        &self,
        f: &mut impl FnMut(&AngleExpr) -> Result<AngleExpr, ZxError>,
    ) -> Result<Diagram, ZxError> {
        Ok(match self {
            Diagram::Gen(Generator::Z { inputs, outputs, phase }) => {
                Diagram::z(*inputs, *outputs, f(phase)?)
            }
            Diagram::Gen(Generator::X { inputs, outputs, phase }) => {
                Diagram::x(*inputs, *outputs, f(phase)?)
            }
            Diagram::Gen(g) => Diagram::Gen(g.clone()),
            Diagram::Seq(parts) => Diagram::Seq(
                parts.iter().map(|d| d.map_phases(f)).collect::<Result<_, _>>()?,
            ),
            Diagram::Par(parts) => Diagram::Par(
                parts.iter().map(|d| d.map_phases(f)).collect::<Result<_, _>>()?,
            ),
        })
    }
}

impl fmt::Display for Diagram {
    /// Renders in the same syntax the parser accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::Gen(Generator::Z { inputs, outputs, phase }) => {
                write!(f, "Z({inputs}, {outputs}, {phase})")
            }
            Diagram::Gen(Generator::X { inputs, outputs, phase }) => {
                write!(f, "X({inputs}, {outputs}, {phase})")
            }
            Diagram::Gen(Generator::H) => write!(f, "H"),
            Diagram::Gen(Generator::Cup) => write!(f, "cup"),
            Diagram::Gen(Generator::Cap) => write!(f, "cap"),
            Diagram::Gen(Generator::Swap) => write!(f, "swap"),
            Diagram::Gen(Generator::Id) => write!(f, "id"),
            Diagram::Gen(Generator::Triangle) => write!(f, "tri"),
            Diagram::Gen(Generator::Empty) => write!(f, "empty"),
            Diagram::Seq(parts) | Diagram::Par(parts) => {
                let head = if matches!(self, Diagram::Seq(_)) { "seq" } else { "par" };
                write!(f, "{head}(")?;
                for (i, d) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
        }
    }
}
