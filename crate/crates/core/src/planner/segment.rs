/*
Copyright 2026 The ertkit Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
//! Shear/shift morphing of micro-segments and segment generation.

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::path::{Configuration, Direction, MicroSegment, PathExperience, PhasedState};

use super::params::{Epsilon, PlannerParams};

/// Shears and shifts a segment: each state moves by `b + rho * lambda`,
/// with `rho` running from 0 at the anchor to 1 at the far end. Phases are
/// left untouched.
pub fn morph_segment(psi_d: &MicroSegment, lambda: &[f64], b: &[f64]) -> Result<MicroSegment> {
    let mut psi = psi_d.clone();
    morph_in_place(&mut psi, lambda, b)?;
    Ok(psi)
}

fn morph_in_place(psi: &mut MicroSegment, lambda: &[f64], b: &[f64]) -> Result<()> {
    let n = psi.dim();
    if lambda.len() != n {
        return Err(Error::dim(n, lambda.len()));
    }
    if b.len() != n {
        return Err(Error::dim(n, b.len()));
    }
    let (anchor, span) = (psi.anchor_alpha(), psi.span());
    for s in psi.states_mut() {
        let rho = (s.alpha - anchor).abs() / span;
        for ((x, l), o) in s.q.coords_mut().iter_mut().zip(lambda).zip(b) {
            *x += rho * l + o;
        }
    }
    Ok(())
}

/// Draws the far phase of an explore segment.
pub fn sample_segment_end<R: Rng + ?Sized>(
    alpha_init: f64,
    direction: Direction,
    params: &PlannerParams,
    rng: &mut R,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha_init) {
        return Err(Error::PhaseOutOfRange(alpha_init));
    }
    let at_extreme = match direction {
        Direction::Forward => alpha_init >= 1.0,
        Direction::Backward => alpha_init <= 0.0,
    };
    if at_extreme {
        return Err(Error::DegenerateSpan(alpha_init));
    }
    let width = params.omega_min + (params.omega_max - params.omega_min) * rng.gen::<f64>();
    Ok(match direction {
        Direction::Forward => (alpha_init + width).min(1.0),
        Direction::Backward => (alpha_init - width).max(0.0),
    })
}

/// Morphs the slice of `xi_prime` between the phases of `s_init` and
/// `s_targ` so that it starts at `s_init` and ends at `s_targ` exactly.
pub fn connect_segment(
    s_init: &PhasedState,
    s_targ: &PhasedState,
    xi_prime: &PathExperience,
) -> Result<(MicroSegment, PhasedState)> {
    let n = xi_prime.dim();
    s_init.q.check_dim(n)?;
    s_targ.q.check_dim(n)?;
    let psi_d = xi_prime.extract_segment(s_init.alpha, s_targ.alpha)?;
    let b = shift_to(&s_init.q, &psi_d);
    let lambda: Coords = (0..n)
        .map(|i| s_targ.q[i] - (psi_d.last().q[i] + b[i]))
        .collect();
    let mut psi = psi_d;
    morph_in_place(&mut psi, &lambda, &b)?;
    let states = psi.states_mut();
    let last = states.len() - 1;
    states[0].q = s_init.q.clone();
    states[last].q = s_targ.q.clone();
    let end = psi.last().clone();
    Ok((psi, end))
}

/// Morphs the slice of `xi_prime` that starts at `s_init` and extends a
/// random phase span in `direction`, shearing it by at most
/// `epsilon * span` per dimension.
pub fn explore_segment<R: Rng + ?Sized>(
    s_init: &PhasedState,
    xi_prime: &PathExperience,
    direction: Direction,
    params: &PlannerParams,
    rng: &mut R,
) -> Result<(MicroSegment, PhasedState)> {
    let n = xi_prime.dim();
    s_init.q.check_dim(n)?;
    if let Epsilon::PerDimension(v) = &params.epsilon {
        if v.len() != n {
            return Err(Error::dim(n, v.len()));
        }
    }
    let alpha_targ = sample_segment_end(s_init.alpha, direction, params, rng)?;
    let psi_d = xi_prime.extract_segment(s_init.alpha, alpha_targ)?;
    let span = psi_d.span();
    let lambda: Coords = (0..n)
        .map(|i| {
            let bound = params.epsilon.get(i) * span;
            -bound + 2.0 * bound * rng.gen::<f64>()
        })
        .collect();
    let b = shift_to(&s_init.q, &psi_d);
    let mut psi = psi_d;
    morph_in_place(&mut psi, &lambda, &b)?;
    psi.states_mut()[0].q = s_init.q.clone();
    let end = psi.last().clone();
    Ok((psi, end))
}

/// Connects to `s_targ` when given, explores otherwise. Returns the
/// segment together with its end state.
pub fn generate_segment<R: Rng + ?Sized>(
    s_init: &PhasedState,
    s_targ: Option<&PhasedState>,
    xi_prime: &PathExperience,
    direction: Direction,
    params: &PlannerParams,
    rng: &mut R,
) -> Result<(MicroSegment, PhasedState)> {
    match s_targ {
        Some(targ) => connect_segment(s_init, targ, xi_prime),
        None => explore_segment(s_init, xi_prime, direction, params, rng),
    }
}

type Coords = SmallVec<[f64; 4]>;

fn shift_to(q: &Configuration, psi_d: &MicroSegment) -> Coords {
    q.iter().zip(psi_d.first().q.iter()).map(|(q, d)| q - d).collect()
}
