//! Exhaustive stabilizer states by breadth-first search over the Clifford
//! orbit of |0…0⟩.

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{out_of_range, Result};
use crate::qcore::{PauliString, PureState};

pub const MAX_STABILIZER_QUBITS: usize = 3;

/// Every n-qubit pure stabilizer state, one representative per ray.
#[derive(Clone, Debug)]
pub struct StabilizerStateSet {
    num_qubits: usize,
    states: Vec<PureState>,
}

impl StabilizerStateSet {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// 2^n ∏_{k=1}^{n} (2^k + 1)
pub fn stabilizer_count(n: usize) -> u64 {
    (1..=n as u32).fold(1u64 << n, |acc, k| acc * ((1u64 << k) + 1))
}

// Phase codes: 0 = zero amplitude, 1..=4 = 1, i, −1, −i (times a common modulus).
type Code = Vec<u8>;

fn unit(code: u8) -> Complex64 {
    match code {
        1 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(0.0, 1.0),
        3 => Complex64::new(-1.0, 0.0),
        4 => Complex64::new(0.0, -1.0),
        _ => Complex64::new(0.0, 0.0),
    }
}

fn decode(code: &Code) -> Vec<Complex64> {
    let support = code.iter().filter(|&&c| c != 0).count();
    let scale = 1.0 / (support as f64).sqrt();
    code.iter().map(|&c| unit(c) * scale).collect()
}

/// Removes the global phase (first nonzero amplitude real positive) and
/// snaps every amplitude to a phase code. Stabilizer amplitudes share one
/// modulus and have phases in {±1, ±i}, so snapping is exact up to rounding.
fn encode(v: &[Complex64]) -> Code {
    let max = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let first = v.iter().find(|a| a.norm() > 0.5 * max).copied().unwrap();
    let phase = first.conj() / first.norm();
    v.iter()
        .map(|&a| {
            if a.norm() < 0.5 * max {
                return 0;
            }
            let z = a * phase;
            if z.re.abs() >= z.im.abs() {
                if z.re > 0.0 {
                    1
                } else {
                    3
                }
            } else if z.im > 0.0 {
                2
            } else {
                4
            }
        })
        .collect()
}

enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

fn apply(gate: &Gate, v: &[Complex64], n: usize) -> Vec<Complex64> {
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut out = v.to_vec();
    match *gate {
        Gate::H(q) => {
            let b = bit(q);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for j in (0..v.len()).filter(|j| j & b == 0) {
                out[j] = (v[j] + v[j | b]) * s;
                out[j | b] = (v[j] - v[j | b]) * s;
            }
        }
        Gate::S(q) => {
            let b = bit(q);
            for j in (0..v.len()).filter(|j| j & b != 0) {
                out[j] = v[j] * Complex64::new(0.0, 1.0);
            }
        }
        Gate::Cnot(c, t) => {
            let (bc, bt) = (bit(c), bit(t));
            for j in 0..v.len() {
                if j & bc != 0 {
                    out[j] = v[j ^ bt];
                }
            }
        }
    }
    out
}

fn enumerate(n: usize) -> StabilizerStateSet {
    let dim = 1usize << n;
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::H(q));
        gates.push(Gate::S(q));
    }
    for c in 0..n {
        for t in 0..n {
            if c != t {
                gates.push(Gate::Cnot(c, t));
            }
        }
    }
    let mut start = vec![0u8; dim];
    start[0] = 1;
    let mut seen: HashSet<Code> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(code) = queue.pop_front() {
        let v = decode(&code);
        for g in &gates {
            let next = encode(&apply(g, &v, n));
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let states = order
        .iter()
        .map(|c| PureState::new(decode(c)).expect("decoded stabilizer states are normalized"))
        .collect();
    StabilizerStateSet { num_qubits: n, states }
}

static CACHE: [OnceLock<Arc<StabilizerStateSet>>; MAX_STABILIZER_QUBITS] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// All stabilizer states on `n ∈ 1..=3` qubits; computed once per process.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Arc<StabilizerStateSet>> {
    if n == 0 || n > MAX_STABILIZER_QUBITS {
        return Err(out_of_range(
            "stabilizer qubits",
            format!("{n} not in 1..={MAX_STABILIZER_QUBITS}"),
        ));
    }
    Ok(CACHE[n - 1].get_or_init(|| Arc::new(enumerate(n))).clone())
}

/// Number of Pauli strings with expectation ±1 (within `tol`).
pub fn stabilizer_group_size(psi: &PureState, tol: f64) -> Result<usize> {
    let mut count = 0;
    for p in PauliString::all(psi.num_qubits()) {
        if (p.expectation(psi)?.abs() - 1.0).abs() < tol {
            count += 1;
        }
    }
    Ok(count)
}
