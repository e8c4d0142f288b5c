//! Shared fixtures for the criterion benchmarks in `benches/`.

use std::collections::BTreeMap;

use zxcheck_core::{Angle, AngleExpr, Cyclotomic, Diagram, RationalAngle};

/// Ladder diagram used to exercise the interpreter: `p` phased one-output
/// X spiders feeding a wide Z spider, with scalar dumbbells for balance.
/// The free phases are bound so the result evaluates on both backends.
pub fn ladder(p: u64) -> Diagram {
    let open = zxcheck_core::supcyc::build_d_diagram(p).expect("valid arity");
    let mut bindings = BTreeMap::new();
    bindings.insert("alpha".to_string(), Angle::rational(1, 6).expect("den > 0"));
    bindings.insert("beta".to_string(), Angle::rational(2, p as i64).expect("den > 0"));
    open.substitute(&bindings).expect("all vars bound")
}

/// Dense-ish cyclotomic element: a sum of `count` roots of unity over
/// denominator `den`, each with a small integer weight.
pub fn root_sum(count: i64, den: i64) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for k in 0..count {
        let root = Cyclotomic::root_of_unity(&RationalAngle::of(k, den));
        acc = acc.add_ref(&root.scale_int(k % 5 - 2));
    }
    acc
}

/// Integer-coefficient polynomial of the given degree, alternating signs.
pub fn int_poly(degree: usize) -> Vec<Cyclotomic> {
    (0..=degree)
        .map(|i| Cyclotomic::from_int(if i % 2 == 0 { i as i64 + 1 } else { -(i as i64) - 3 }))
        .collect()
}

/// A one-wire chain of alternating-color spiders with mixed denominators.
pub fn spider_chain(len: usize) -> Diagram {
    let dens = [2i64, 3, 4, 6, 8, 12];
    let mut stages = Vec::with_capacity(len);
    for i in 0..len {
        let phase = AngleExpr::constant(
            Angle::rational((i as i64) % 7 + 1, dens[i % dens.len()]).expect("den > 0"),
        );
        if i % 2 == 0 {
            stages.push(Diagram::z(1, 1, phase));
        } else {
            stages.push(Diagram::x(1, 1, phase));
        }
    }
    Diagram::Seq(stages)
}
