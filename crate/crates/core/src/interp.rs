//! From concrete diagrams to matrices.
//!
//! A diagram with `n` inputs and `m` outputs evaluates to a `2^m x 2^n`
//! matrix. Sequential composition multiplies (later factors on the left),
//! parallel composition takes Kronecker products with the first operand on
//! the high-order bits.
//!
//! The exact backend works in a single cyclotomic field chosen up front:
//! the order is `lcm(8, 2 * den)` over all phase denominators, so every
//! phase and every factor of `1/sqrt(2)` lives in the same field. The float
//! backend uses `Complex64` throughout.

use num_complex::Complex64;

use crate::angle::Angle;
use crate::cyclotomic::{working_order, Cyclotomic};
use crate::diagram::{Diagram, Generator};
use crate::matrix::{Mat, Matrix};
use crate::ZxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub backend: Backend,
    /// Maximum boundary wires on any subterm; dimensions stay `<= 2^cap`.
    pub wire_cap: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { backend: Backend::Exact, wire_cap: 14 }
    }
}

/// Evaluates a concrete diagram. Fails on free variables, wire counts past
/// the cap, and (for the exact backend) real-valued angles.
pub fn interpret(d: &Diagram, cfg: &EvalConfig) -> Result<Matrix, ZxError> {
    d.validate()?;
    if let Some(name) = d.free_vars().into_iter().next() {
        return Err(ZxError::UnboundVariable { name });
    }
    check_wires(d, cfg.wire_cap)?;
    match cfg.backend {
        Backend::Float => Ok(Matrix::Float(eval_float(d))),
        Backend::Exact => {
            let mut dens = Vec::new();
            collect_denominators(d, &mut dens)?;
            let order = working_order(dens)?;
            Ok(Matrix::Exact(eval_exact(d, order)))
        }
    }
}

fn check_wires(d: &Diagram, cap: u32) -> Result<(), ZxError> {
    let (i, o) = d.arity();
    let wires = i.max(o);
    if wires > cap as usize {
        return Err(ZxError::WireCap { wires: wires as u32, cap });
    }
    match d {
        Diagram::Gen(_) => Ok(()),
        Diagram::Seq(parts) | Diagram::Par(parts) => {
            parts.iter().try_for_each(|p| check_wires(p, cap))
        }
    }
}

fn collect_denominators(d: &Diagram, out: &mut Vec<i64>) -> Result<(), ZxError> {
    match d {
        Diagram::Gen(Generator::Z { phase, .. }) | Diagram::Gen(Generator::X { phase, .. }) => {
            match phase.as_constant() {
                Some(Angle::Rational(r)) => {
                    out.push(r.denom());
                    Ok(())
                }
                Some(Angle::Real(_)) => Err(ZxError::ExactNeedsRational),
                None => Err(ZxError::UnboundVariable {
                    name: phase.terms.keys().next().cloned().unwrap_or_default(),
                }),
            }
        }
        Diagram::Gen(_) => Ok(()),
        Diagram::Seq(parts) | Diagram::Par(parts) => {
            parts.iter().try_for_each(|p| collect_denominators(p, out))
        }
    }
}

/// `e^{i * angle}` in the field of order `n`; `n` must be a multiple of the
/// angle's own root-of-unity order, which the working-order choice ensures.
fn phase_exact(angle: &Angle, n: u64) -> Cyclotomic {
    match angle {
        Angle::Rational(r) => {
            let (ord, k) = r.as_root_of_unity();
            debug_assert_eq!(n % ord, 0, "working order misses a phase");
            Cyclotomic::root_at(n, k * (n / ord))
        }
        Angle::Real(_) => unreachable!("checked by collect_denominators"),
    }
}

fn phase_float(angle: &Angle) -> Complex64 {
    let t = angle.to_f64();
    Complex64::new(t.cos(), t.sin())
}

fn constant_phase(d: &Generator) -> &Angle {
    match d {
        Generator::Z { phase, .. } | Generator::X { phase, .. } => {
            phase.as_constant().expect("concrete diagram")
        }
        _ => unreachable!(),
    }
}

/// Shared shape of both spider families, generic over the scalar type.
///
/// The Z spider is zero except for `1` at `(0, 0)` and an added `e^{i a}` at
/// the opposite corner. The X spider is its Hadamard conjugate, expanded in
/// closed form: entry `(i, j)` is `2^{-(n+m)/2} (1 + e^{i a} (-1)^{pop})`
/// with `pop` the parity of the combined bit population of `i` and `j`.
fn z_spider<T, F>(inputs: usize, outputs: usize, phase: T, mut add: F) -> Mat<T>
where
    T: Clone + num_traits::Zero + num_traits::One,
    F: FnMut(&T, &T) -> T,
{
    let mut m = Mat::zeros(1 << outputs, 1 << inputs);
    m.set(0, 0, T::one());
    let corner = add(m.get((1 << outputs) - 1, (1 << inputs) - 1), &phase);
    m.set((1 << outputs) - 1, (1 << inputs) - 1, corner);
    m
}

fn eval_exact(d: &Diagram, order: u64) -> Mat<Cyclotomic> {
    match d {
        Diagram::Gen(g) => match g {
            Generator::Z { inputs, outputs, .. } => {
                let ph = phase_exact(constant_phase(g), order);
                z_spider(*inputs, *outputs, ph, |a, b| a.add_ref(b))
            }
            Generator::X { inputs, outputs, .. } => {
                let ph = phase_exact(constant_phase(g), order);
                let scale = Cyclotomic::inv_sqrt2().pow((inputs + outputs) as u32);
                let mut m = Mat::zeros(1 << outputs, 1 << inputs);
                for i in 0..1usize << outputs {
                    for j in 0..1usize << inputs {
                        let sign = (i.count_ones() + j.count_ones()) % 2 == 1;
                        let signed = if sign { ph.neg_ref() } else { ph.clone() };
                        let v = Cyclotomic::one().add_ref(&signed).mul_ref(&scale);
                        m.set(i, j, v);
                    }
                }
                m
            }
            Generator::H => {
                let h = Cyclotomic::inv_sqrt2();
                Mat::from_rows(vec![
                    vec![h.clone(), h.clone()],
                    vec![h.clone(), h.neg_ref()],
                ])
            }
            Generator::Cup => {
                let mut m = Mat::zeros(1, 4);
                m.set(0, 0, Cyclotomic::one());
                m.set(0, 3, Cyclotomic::one());
                m
            }
            Generator::Cap => {
                let mut m = Mat::zeros(4, 1);
                m.set(0, 0, Cyclotomic::one());
                m.set(3, 0, Cyclotomic::one());
                m
            }
            Generator::Swap => {
                let mut m = Mat::zeros(4, 4);
                m.set(0, 0, Cyclotomic::one());
                m.set(1, 2, Cyclotomic::one());
                m.set(2, 1, Cyclotomic::one());
                m.set(3, 3, Cyclotomic::one());
                m
            }
            Generator::Id => Mat::identity(2),
            Generator::Triangle => Mat::from_rows(vec![
                vec![Cyclotomic::one(), Cyclotomic::one()],
                vec![Cyclotomic::zero(), Cyclotomic::one()],
            ]),
            Generator::Empty => Mat::identity(1),
        },
        Diagram::Seq(parts) => {
            let mut acc = eval_exact(&parts[0], order);
            for p in &parts[1..] {
                acc = eval_exact(p, order).mul_mat(&acc);
            }
            acc
        }
        Diagram::Par(parts) => {
            let mut acc = eval_exact(&parts[0], order);
            for p in &parts[1..] {
                acc = acc.kron(&eval_exact(p, order));
            }
            acc
        }
    }
}

fn eval_float(d: &Diagram) -> Mat<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match d {
        Diagram::Gen(g) => match g {
            Generator::Z { inputs, outputs, .. } => {
                let ph = phase_float(constant_phase(g));
                z_spider(*inputs, *outputs, ph, |a, b| a + b)
            }
            Generator::X { inputs, outputs, .. } => {
                let ph = phase_float(constant_phase(g));
                let scale = (0.5f64).powf((inputs + outputs) as f64 / 2.0);
                let mut m = Mat::zeros(1 << outputs, 1 << inputs);
                for i in 0..1usize << outputs {
                    for j in 0..1usize << inputs {
                        let sign = if (i.count_ones() + j.count_ones()) % 2 == 1 {
                            -1.0
                        } else {
                            1.0
                        };
                        m.set(i, j, (one + ph * sign) * scale);
                    }
                }
                m
            }
            Generator::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                Mat::from_rows(vec![vec![h, h], vec![h, -h]])
            }
            Generator::Cup => {
                let mut m = Mat::zeros(1, 4);
                m.set(0, 0, one);
                m.set(0, 3, one);
                m
            }
            Generator::Cap => {
                let mut m = Mat::zeros(4, 1);
                m.set(0, 0, one);
                m.set(3, 0, one);
                m
            }
            Generator::Swap => {
                let mut m = Mat::zeros(4, 4);
                m.set(0, 0, one);
                m.set(1, 2, one);
                m.set(2, 1, one);
                m.set(3, 3, one);
                m
            }
            Generator::Id => Mat::identity(2),
            Generator::Triangle => {
                Mat::from_rows(vec![vec![one, one], vec![zero, one]])
            }
            Generator::Empty => Mat::identity(1),
        },
        Diagram::Seq(parts) => {
            let mut acc = eval_float(&parts[0]);
            for p in &parts[1..] {
                acc = eval_float(p).mul_mat(&acc);
            }
            acc
        }
        Diagram::Par(parts) => {
            let mut acc = eval_float(&parts[0]);
            for p in &parts[1..] {
                acc = acc.kron(&eval_float(p));
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::AngleExpr;
    use crate::matrix::{matrices_equal, Matrix};
    use crate::parser::parse_term;

    fn eval(src: &str) -> Matrix {
        let d = parse_term(src, &[]).unwrap();
        interpret(&d, &EvalConfig::default()).unwrap()
    }

    fn eval_f(src: &str) -> Matrix {
        let d = parse_term(src, &[]).unwrap();
        interpret(&d, &EvalConfig { backend: Backend::Float, wire_cap: 14 }).unwrap()
    }

    fn exact(m: &Matrix) -> &Mat<Cyclotomic> {
        match m {
            Matrix::Exact(m) => m,
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn spider_corners() {
        // 1 + e^{i pi} = 0 for the scalar spider.
        let m = eval("Z(0, 0, pi)");
        assert!(exact(&m).get(0, 0).is_zero());
        // Phaseless copy spider.
        let m = eval("Z(1, 2)");
        let c = exact(&m);
        assert_eq!(c.rows(), 4);
        assert!(c.get(0, 0).eq_value(&Cyclotomic::one()));
        assert!(c.get(3, 1).eq_value(&Cyclotomic::one()));
        assert!(c.get(1, 0).is_zero() && c.get(2, 1).is_zero());
    }

    #[test]
    fn bent_wires_compose_to_two() {
        let m = eval("seq(cap, cup)");
        assert!(exact(&m).get(0, 0).eq_value(&Cyclotomic::from_int(2)));
    }

    #[test]
    fn x_states_and_effects() {
        // X(0,1,0) = sqrt(2)|0>, X(1,0,pi) = sqrt(2)<1|.
        let m = eval("X(0, 1, 0)");
        let c = exact(&m);
        assert!(c.get(0, 0).eq_value(&Cyclotomic::sqrt2()));
        assert!(c.get(1, 0).is_zero());
        let m = eval("X(1, 0, pi)");
        let c = exact(&m);
        assert!(c.get(0, 0).is_zero());
        assert!(c.get(0, 1).eq_value(&Cyclotomic::sqrt2()));
    }

    #[test]
    fn x_pi_is_not() {
        let m = eval("X(1, 1, pi)");
        let c = exact(&m);
        assert!(c.get(0, 1).eq_value(&Cyclotomic::one()));
        assert!(c.get(1, 0).eq_value(&Cyclotomic::one()));
        assert!(c.get(0, 0).is_zero() && c.get(1, 1).is_zero());
    }

    #[test]
    fn scalar_gadget_value() {
        // seq(Z(0,1,g), X(1,0,pi)) evaluates to sqrt(2) e^{i g}.
        let m = eval("seq(Z(0, 1, pi/2), X(1, 0, pi))");
        let want = Cyclotomic::sqrt2().mul_ref(&Cyclotomic::root_at(4, 1));
        assert!(exact(&m).get(0, 0).eq_value(&want));
    }

    #[test]
    fn hadamard_conjugation_matches_x() {
        // X(n,m,a) = H^m . Z(n,m,a) . H^n on a couple of shapes.
        for (n, m, a) in [(1usize, 1usize, "pi/3"), (2, 1, "3*pi/4"), (1, 2, "pi")] {
            let hs_in = vec!["H"; n].join(", ");
            let hs_out = vec!["H"; m].join(", ");
            let lhs = format!("X({n}, {m}, {a})");
            let rhs = match (n, m) {
                (1, _) => format!("seq(H, Z({n}, {m}, {a}), par({hs_out}))"),
                (_, 1) => format!("seq(par({hs_in}), Z({n}, {m}, {a}), H)"),
                _ => format!("seq(par({hs_in}), Z({n}, {m}, {a}), par({hs_out}))"),
            };
            let a = eval(&lhs);
            let b = eval(&rhs);
            assert!(matrices_equal(&a, &b, 1e-12), "H conjugation failed for {lhs}");
        }
    }

    #[test]
    fn float_matches_exact() {
        for src in [
            "seq(Z(2, 1, pi/3), X(1, 2, 5*pi/6))",
            "par(H, tri, Z(0, 0, pi/5))",
            "seq(X(0, 2, pi/4), cup)",
            "seq(cap, par(H, H), swap, cup)",
        ] {
            let e = eval(src);
            let f = eval_f(src);
            assert!(matrices_equal(&e, &f, 1e-9), "backend mismatch for {src}");
        }
    }

    #[test]
    fn errors() {
        let free = Diagram::z(1, 1, AngleExpr::variable("a"));
        assert!(matches!(
            interpret(&free, &EvalConfig::default()),
            Err(ZxError::UnboundVariable { .. })
        ));

        let real = parse_term("Z(1, 1, 0.5r)", &[]).unwrap();
        assert!(matches!(
            interpret(&real, &EvalConfig::default()),
            Err(ZxError::ExactNeedsRational)
        ));
        assert!(interpret(&real, &EvalConfig { backend: Backend::Float, wire_cap: 14 }).is_ok());

        let wide = parse_term("Z(0, 15)", &[]).unwrap();
        assert!(matches!(
            interpret(&wide, &EvalConfig::default()),
            Err(ZxError::WireCap { wires: 15, cap: 14 })
        ));
    }

    #[test]
    fn swap_wiring() {
        // swap . (|a> x |b>) = |b> x |a> using X basis states scaled away.
        let d = eval("seq(par(X(0, 1, 0), Z(0, 1, pi)), swap)");
        let e = eval("par(Z(0, 1, pi), X(0, 1, 0))");
        assert!(matrices_equal(&d, &e, 1e-12));
    }
}
