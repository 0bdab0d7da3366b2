//! Input and output loop conditions.
//!
//! The input loop condition asks for a cycle `w` on the input state `x`
//! with `m -w-> y` and `y[i] > m[i]` wherever `m[i] < x[i]` (finite `m`,
//! ⊤ in `x`). This is coverability in the graph seen as a VASS, starting
//! from `(x, m)` and targeting `(x, m + 1)` on those coordinates; the other
//! coordinates are unconstrained. The output condition is the same question
//! on the reversed graph with negated displacements, starting from `m'`.

use num_bigint::BigInt;

use super::{MarkedGraph, MrgsError};
use crate::vas::{cover_witness, karp_miller_covers, ExtConfig, ExtNat};

fn pump_target(m: &ExtConfig, x: &ExtConfig) -> ExtConfig {
    ExtConfig(
        m.0.iter()
            .zip(&x.0)
            .map(|(mi, xi)| match (mi, xi) {
                (ExtNat::Fin(v), ExtNat::Top) => ExtNat::Fin(v + BigInt::from(1)),
                _ => ExtNat::Top,
            })
            .collect(),
    )
}

pub fn input_loop_condition(b: &MarkedGraph) -> Result<bool, MrgsError> {
    let vass = b.graph.as_vass();
    let target = pump_target(&b.input_constraint, b.input_node());
    Ok(karp_miller_covers(
        &vass,
        (b.input_state, b.input_constraint.clone()),
        (b.input_state, target),
    )?)
}

pub fn output_loop_condition(b: &MarkedGraph) -> Result<bool, MrgsError> {
    let vass = b.graph.reversed_vass();
    let target = pump_target(&b.output_constraint, b.output_node());
    Ok(karp_miller_covers(
        &vass,
        (b.output_state, b.output_constraint.clone()),
        (b.output_state, target),
    )?)
}

/// An edge cycle on the input state witnessing the input loop condition.
pub fn input_loop_witness(b: &MarkedGraph) -> Result<Option<Vec<usize>>, MrgsError> {
    if !input_loop_condition(b)? {
        return Ok(None);
    }
    let vass = b.graph.as_vass();
    let target = pump_target(&b.input_constraint, b.input_node());
    Ok(cover_witness(
        &vass,
        (b.input_state, b.input_constraint.clone()),
        (b.input_state, target),
        None,
    )?)
}

/// An edge cycle on the output state witnessing the output loop condition,
/// in forward order.
pub fn output_loop_witness(b: &MarkedGraph) -> Result<Option<Vec<usize>>, MrgsError> {
    if !output_loop_condition(b)? {
        return Ok(None);
    }
    let vass = b.graph.reversed_vass();
    let target = pump_target(&b.output_constraint, b.output_node());
    // reversed edges keep their index, so reversing the path is enough
    Ok(cover_witness(
        &vass,
        (b.output_state, b.output_constraint.clone()),
        (b.output_state, target),
        None,
    )?
    .map(|mut p| {
        p.reverse();
        p
    }))
}
