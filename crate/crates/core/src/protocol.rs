//! The 7-qubit teleportation experiment.
//!
//! Layout: q0 carries the input state, (q1, q2) are the scrambled partners
//! of the memory qubits (q3, q4), and (q5, q6) is the decoder's ancilla
//! pair. The scrambler acts on (q0, q1, q2); its complex conjugate acts on
//! (q5, q3, q4) position by position. Success is projection of a mirror pair
//! onto `|EPR>`; the decoded state is read from q6.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{Circuit, CircuitError, ScramblerFamily, ScramblerSpec};
use crate::noisemodel::{
    attach_gate_noise, mismatch_layer, readout_flip_channel, Instruction, NoiseConfig, NoiseError,
    NoisyCircuit,
};
use crate::simkernel::{DensityMatrix, GateOp, SimError, StateVector, C64};

pub const N_QUBITS: usize = 7;

/// Qubit roles in the 7-qubit register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub alice: usize,
    pub blackhole: [usize; 2],
    pub memory: [usize; 2],
    pub ancilla_in: usize,
    pub ancilla_out: usize,
    pub epr_pairs: [(usize, usize); 3],
}

pub const LAYOUT: RegisterLayout = RegisterLayout {
    alice: 0,
    blackhole: [1, 2],
    memory: [3, 4],
    ancilla_in: 5,
    ancilla_out: 6,
    epr_pairs: [(1, 3), (2, 4), (5, 6)],
};

impl RegisterLayout {
    /// Register the scrambler acts on, in scrambler-local order.
    pub fn scrambled(&self) -> [usize; 3] {
        [self.alice, self.blackhole[0], self.blackhole[1]]
    }

    /// Register the decoder acts on, mirroring [`Self::scrambled`].
    pub fn decoded(&self) -> [usize; 3] {
        [self.ancilla_in, self.memory[0], self.memory[1]]
    }

    /// Mirror partner of a qubit in either 3-qubit register.
    pub fn mirror(&self, q: usize) -> Option<usize> {
        let s = self.scrambled();
        let d = self.decoded();
        s.iter()
            .position(|&x| x == q)
            .map(|i| d[i])
            .or_else(|| d.iter().position(|&x| x == q).map(|i| s[i]))
    }
}

/// Which mirror pair is projected onto `|EPR>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Pair {
    /// (q0, q5)
    Pair0,
    /// (q1, q3)
    Pair1,
    /// (q2, q4)
    Pair2,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Pair0, Pair::Pair1, Pair::Pair2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Pair> {
        Pair::ALL.get(i).copied()
    }

    /// The scrambler-register qubit this pair reads out.
    pub fn hawking_qubit(self) -> usize {
        self.index()
    }

    pub fn qubits(self) -> (usize, usize) {
        let q = LAYOUT.scrambled()[self.index()];
        (q, LAYOUT.mirror(q).expect("scrambled qubit has a mirror"))
    }
}

impl From<Pair> for u8 {
    fn from(p: Pair) -> u8 {
        p.index() as u8
    }
}

impl TryFrom<u8> for Pair {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        Pair::from_index(v as usize).ok_or_else(|| format!("pair {v} is not one of 0, 1, 2"))
    }
}

/// The six single-qubit Pauli eigenstates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InputState {
    #[serde(rename = "0x")]
    ZeroX,
    #[serde(rename = "1x")]
    OneX,
    #[serde(rename = "0y")]
    ZeroY,
    #[serde(rename = "1y")]
    OneY,
    #[serde(rename = "0z")]
    ZeroZ,
    #[serde(rename = "1z")]
    OneZ,
}

impl InputState {
    pub const ALL: [InputState; 6] = [
        InputState::ZeroX,
        InputState::OneX,
        InputState::ZeroY,
        InputState::OneY,
        InputState::ZeroZ,
        InputState::OneZ,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InputState::ZeroX => "0x",
            InputState::OneX => "1x",
            InputState::ZeroY => "0y",
            InputState::OneY => "1y",
            InputState::ZeroZ => "0z",
            InputState::OneZ => "1z",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        InputState::ALL.iter().copied().find(|s| s.label() == label)
    }

    /// Bloch angles `(θ, φ)` with `|ψ> = cos θ/2 |0> + e^{iφ} sin θ/2 |1>`.
    fn bloch(self) -> (f64, f64) {
        match self {
            InputState::ZeroX => (FRAC_PI_2, 0.0),
            InputState::OneX => (FRAC_PI_2, PI),
            InputState::ZeroY => (FRAC_PI_2, FRAC_PI_2),
            InputState::OneY => (FRAC_PI_2, -FRAC_PI_2),
            InputState::ZeroZ => (0.0, 0.0),
            InputState::OneZ => (PI, 0.0),
        }
    }

    pub fn amplitudes(self) -> [C64; 2] {
        let (theta, phi) = self.bloch();
        [
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]
    }

    pub fn state_vector(self) -> StateVector {
        StateVector::from_amplitudes(self.amplitudes().to_vec()).expect("unit-norm eigenstate")
    }

    /// Single gate taking `|0>` to this state on qubit `q`.
    pub fn prep_gate(self, q: usize) -> GateOp {
        let (theta, phi) = self.bloch();
        GateOp::u3(theta, phi, 0.0, q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoder {
    Probabilistic,
    Grover,
    GroverPurified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub scrambler: ScramblerSpec,
    pub input: InputState,
    pub pair: Pair,
    pub decoder: Decoder,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub seed: u64,
}

impl ProtocolConfig {
    /// Noiseless probabilistic run.
    pub fn ideal(scrambler: ScramblerSpec, input: InputState, pair: Pair) -> Self {
        Self {
            scrambler,
            input,
            pair,
            decoder: Decoder::Probabilistic,
            noise: NoiseConfig::ideal(),
            seed: 0,
        }
    }

    pub fn with_noise(mut self, noise: NoiseConfig) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_decoder(mut self, decoder: Decoder) -> Self {
        self.decoder = decoder;
        self
    }
}

/// Observables of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub p_success: f64,
    /// `None` when the conditioning outcome is impossible; the fidelity is
    /// then undefined rather than zero.
    pub fidelity: Option<f64>,
    /// Reduced state of the output ancilla, when defined.
    pub raw: Option<DensityMatrix>,
}

impl RunResult {
    pub fn fidelity_defined(&self) -> bool {
        self.fidelity.is_some()
    }

    /// `F · P`, which is zero on impossible outcomes whatever F would be.
    pub fn fidelity_times_p(&self) -> f64 {
        self.fidelity.map_or(0.0, |f| f * self.p_success)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("scrambler must act on 3 qubits, got {0}")]
    ScramblerSize(usize),
    #[error("decoder {got:?} cannot run here (expected {expected})")]
    WrongDecoder { expected: &'static str, got: Decoder },
    #[error("the mismatch control requires the identity-control scrambler, got {0}")]
    WrongScrambler(&'static str),
}

/// Appends the teleportation circuit for an explicit scrambler: input prep,
/// EPR preparation, `U` on (q0, q1, q2), the optional mismatch layer, and
/// `U*` on (q5, q3, q4).
fn forward_circuit(
    scrambler: &Circuit,
    input: InputState,
    noise: &NoiseConfig,
) -> Result<Circuit, ProtocolError> {
    if scrambler.n_qubits() != 3 {
        return Err(ProtocolError::ScramblerSize(scrambler.n_qubits()));
    }
    noise.validate()?;
    let mut c = Circuit::new(N_QUBITS)?;
    c.push(input.prep_gate(LAYOUT.alice))?;
    for &(a, b) in &LAYOUT.epr_pairs {
        c.push(GateOp::h(a))?;
        c.push(GateOp::cnot(a, b))?;
    }
    c.append_mapped(scrambler, &LAYOUT.scrambled())?;
    if noise.layers.mismatch {
        for g in mismatch_layer(noise.mismatch_theta, noise.mismatch_axis) {
            c.push(g.remapped(|q| LAYOUT.scrambled()[q])?)?;
        }
    }
    c.append_mapped(&scrambler.conjugate(), &LAYOUT.decoded())?;
    Ok(c)
}

/// One Grover iteration searching for `|EPR>` on `pair`: reflect about the
/// target pair, undo the decoder, reflect about the ancilla EPR pair, redo
/// the decoder.
fn append_grover_iteration(
    c: &mut Circuit,
    scrambler: &Circuit,
    pair: Pair,
) -> Result<(), ProtocolError> {
    let decoder = scrambler.conjugate();
    let (a, b) = pair.qubits();
    push_all(c, epr_reflection(a, b))?;
    c.append_mapped(&decoder.inverse(), &LAYOUT.decoded())?;
    push_all(c, epr_reflection(LAYOUT.ancilla_in, LAYOUT.ancilla_out))?;
    c.append_mapped(&decoder, &LAYOUT.decoded())?;
    Ok(())
}

fn push_all(c: &mut Circuit, gates: impl IntoIterator<Item = GateOp>) -> Result<(), ProtocolError> {
    for g in gates {
        c.push(g)?;
    }
    Ok(())
}

/// Maps `|EPR>` on `(a, b)` to `|00>`, so an EPR projection becomes a
/// computational-basis readout.
fn bell_rotation(a: usize, b: usize) -> [GateOp; 2] {
    [GateOp::cnot(a, b), GateOp::h(a)]
}

fn bell_rotation_inverse(a: usize, b: usize) -> [GateOp; 2] {
    [GateOp::h(a), GateOp::cnot(a, b)]
}

/// `I - 2|EPR><EPR|` in native gates: rotate to the computational basis,
/// flip the sign of `|00>` with `X⊗X · CZ · X⊗X`, rotate back.
fn epr_reflection(a: usize, b: usize) -> Vec<GateOp> {
    let mut gates = bell_rotation(a, b).to_vec();
    gates.extend([
        GateOp::x(a),
        GateOp::x(b),
        GateOp::cz(a, b),
        GateOp::x(a),
        GateOp::x(b),
    ]);
    gates.extend(bell_rotation_inverse(a, b));
    gates
}

fn unitary_circuit(
    scrambler: &Circuit,
    input: InputState,
    pair: Pair,
    decoder: Decoder,
    noise: &NoiseConfig,
) -> Result<Circuit, ProtocolError> {
    let mut c = forward_circuit(scrambler, input, noise)?;
    if decoder != Decoder::Probabilistic {
        append_grover_iteration(&mut c, scrambler, pair)?;
    }
    if decoder != Decoder::Grover {
        let (a, b) = pair.qubits();
        push_all(&mut c, bell_rotation(a, b))?;
    }
    Ok(c)
}

/// The full 7-qubit unitary part of the experiment for `cfg`, including the
/// Grover iteration for the deterministic decoders. Gate noise channels are
/// not part of the returned circuit; see [`attach_gate_noise`].
pub fn build_protocol_circuit(cfg: &ProtocolConfig) -> Result<Circuit, ProtocolError> {
    let scrambler = cfg.scrambler.circuit()?;
    unitary_circuit(&scrambler, cfg.input, cfg.pair, cfg.decoder, &cfg.noise)
}

/// Qubits read out at the end of a run.
fn measured_qubits(pair: Pair, decoder: Decoder) -> Vec<usize> {
    let (a, b) = pair.qubits();
    match decoder {
        Decoder::Grover => vec![LAYOUT.ancilla_out],
        _ => vec![a, b, LAYOUT.ancilla_out],
    }
}

fn noisy_program(
    scrambler: &Circuit,
    input: InputState,
    pair: Pair,
    decoder: Decoder,
    noise: &NoiseConfig,
) -> Result<NoisyCircuit, ProtocolError> {
    let unitary = unitary_circuit(scrambler, input, pair, decoder, noise)?;
    let mut program = attach_gate_noise(&unitary, noise)?;
    if noise.readout_active() {
        for q in measured_qubits(pair, decoder) {
            program.push(Instruction::Channel(readout_flip_channel(
                noise.readout_flip,
                q,
            )?));
        }
    }
    Ok(program)
}

enum Final {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

fn execute(program: &NoisyCircuit) -> Result<Final, ProtocolError> {
    let start = StateVector::init_basis(program.n_qubits(), 0)?;
    if !program.has_channels() {
        let mut s = start;
        for op in program.ops() {
            if let Instruction::Gate(g) = op {
                s.apply_gate(g)?;
            }
        }
        return Ok(Final::Pure(s));
    }
    let mut rho = DensityMatrix::from_pure(&start)?;
    for op in program.ops() {
        match op {
            Instruction::Gate(g) => rho.apply_gate(g)?,
            Instruction::Channel(ch) => rho.apply_channel(ch)?,
        }
    }
    Ok(Final::Mixed(rho))
}

fn readout(state: &Final, input: InputState) -> Result<RunResult, ProtocolError> {
    let out = match state {
        Final::Pure(s) => s.reduced_density(&[LAYOUT.ancilla_out])?,
        Final::Mixed(rho) => rho.partial_trace(&[LAYOUT.ancilla_out])?,
    };
    let fidelity = out.fidelity_pure(&input.state_vector())?;
    Ok(RunResult {
        p_success: 1.0,
        fidelity: Some(fidelity),
        raw: Some(out),
    })
}

/// Reads `|00>` on the Bell-rotated pair. The rotation is undone noiselessly
/// so the outcome can be taken as an EPR projection.
fn project_and_read(state: Final, pair: Pair, input: InputState) -> Result<RunResult, ProtocolError> {
    let (a, b) = pair.qubits();
    let state = match state {
        Final::Pure(mut s) => {
            for g in bell_rotation_inverse(a, b) {
                s.apply_gate(&g)?;
            }
            Final::Pure(s)
        }
        Final::Mixed(mut rho) => {
            for g in bell_rotation_inverse(a, b) {
                rho.apply_gate(&g)?;
            }
            Final::Mixed(rho)
        }
    };
    let projected = match &state {
        Final::Pure(s) => s.project_epr(a, b).map(|(p, post)| (p, Final::Pure(post))),
        Final::Mixed(rho) => rho.epr_project(a, b).map(|(p, post)| (p, Final::Mixed(post))),
    };
    match projected {
        Ok((p, post)) => {
            let mut result = readout(&post, input)?;
            result.p_success = p;
            Ok(result)
        }
        Err(SimError::ImpossibleOutcome { prob }) => Ok(RunResult {
            p_success: prob.max(0.0),
            fidelity: None,
            raw: None,
        }),
        Err(e) => Err(e.into()),
    }
}

/// Runs the experiment with an explicit 3-qubit scrambler.
pub fn run_with_scrambler(
    scrambler: &Circuit,
    input: InputState,
    pair: Pair,
    decoder: Decoder,
    noise: &NoiseConfig,
) -> Result<RunResult, ProtocolError> {
    let program = noisy_program(scrambler, input, pair, decoder, noise)?;
    let state = execute(&program)?;
    match decoder {
        Decoder::Probabilistic | Decoder::GroverPurified => project_and_read(state, pair, input),
        Decoder::Grover => readout(&state, input),
    }
}

/// Noiseless probabilistic run for an explicit scrambler.
pub fn ideal_run(scrambler: &Circuit, input: InputState, pair: Pair) -> Result<RunResult, ProtocolError> {
    run_with_scrambler(
        scrambler,
        input,
        pair,
        Decoder::Probabilistic,
        &NoiseConfig::ideal(),
    )
}

/// Post-selected decoding: project `cfg.pair` onto `|EPR>` and read q6.
pub fn run_probabilistic(cfg: &ProtocolConfig) -> Result<RunResult, ProtocolError> {
    if cfg.decoder != Decoder::Probabilistic {
        return Err(ProtocolError::WrongDecoder {
            expected: "probabilistic",
            got: cfg.decoder,
        });
    }
    run(cfg)
}

/// Identity-control run with mismatch rotations of strength `theta` between
/// the scrambler and the decoder. The axis and other noise come from `base`.
pub fn run_mismatch_control(theta: f64, base: &ProtocolConfig) -> Result<RunResult, ProtocolError> {
    if base.scrambler.family != ScramblerFamily::IdentityControl {
        return Err(ProtocolError::WrongScrambler(base.scrambler.family.name()));
    }
    let mut cfg = *base;
    cfg.noise = cfg.noise.with_mismatch(theta, base.noise.mismatch_axis);
    run_probabilistic(&cfg)
}

/// Deterministic decoding by one Grover iteration, optionally followed by a
/// purifying EPR projection on `cfg.pair`.
pub fn run_grover(cfg: &ProtocolConfig, purify: bool) -> Result<RunResult, ProtocolError> {
    let decoder = if purify {
        Decoder::GroverPurified
    } else {
        Decoder::Grover
    };
    if cfg.decoder != decoder {
        return Err(ProtocolError::WrongDecoder {
            expected: if purify { "grover_purified" } else { "grover" },
            got: cfg.decoder,
        });
    }
    run(cfg)
}

/// Runs `cfg` with whichever decoder it names.
pub fn run(cfg: &ProtocolConfig) -> Result<RunResult, ProtocolError> {
    let scrambler = cfg.scrambler.circuit()?;
    run_with_scrambler(&scrambler, cfg.input, cfg.pair, cfg.decoder, &cfg.noise)
}

/// Runs every configuration in parallel. Output order matches input order and
/// a failing run does not stop the others.
pub fn sweep(configs: &[ProtocolConfig]) -> Vec<(ProtocolConfig, Result<RunResult, ProtocolError>)> {
    configs
        .par_iter()
        .map(|cfg| (*cfg, run(cfg)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{build_identity_control, build_scrambler};
    use crate::noisemodel::Axis;
    use crate::simkernel::Matrix;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-9;

    #[test]
    fn layout_invariants() {
        let mut all = vec![LAYOUT.alice, LAYOUT.ancilla_in, LAYOUT.ancilla_out];
        all.extend(LAYOUT.blackhole);
        all.extend(LAYOUT.memory);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 7);
        for q in 0..7 {
            if let Some(m) = LAYOUT.mirror(q) {
                assert_eq!(LAYOUT.mirror(m), Some(q));
            }
        }
        assert_eq!(Pair::Pair0.qubits(), (0, 5));
        assert_eq!(Pair::Pair1.qubits(), (1, 3));
        assert_eq!(Pair::Pair2.qubits(), (2, 4));
    }

    #[test]
    fn input_states_average_to_identity() {
        let mut acc = Matrix::zeros(2);
        for s in InputState::ALL {
            let a = s.amplitudes();
            acc = acc.add(&Matrix::outer(&a, &a));
        }
        let avg = acc.scale(C64::new(1.0 / 6.0, 0.0));
        assert!(avg.max_abs_diff(&Matrix::identity(2).scale(C64::new(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn input_states_are_pauli_eigenstates() {
        use crate::circuits::Pauli;
        let cases = [
            (InputState::ZeroX, Pauli::X, 1.0),
            (InputState::OneX, Pauli::X, -1.0),
            (InputState::ZeroY, Pauli::Y, 1.0),
            (InputState::OneY, Pauli::Y, -1.0),
            (InputState::ZeroZ, Pauli::Z, 1.0),
            (InputState::OneZ, Pauli::Z, -1.0),
        ];
        for (s, p, eig) in cases {
            let v = s.amplitudes();
            let pv = p.matrix().mul_vec(&v);
            for (x, y) in pv.iter().zip(&v) {
                assert!((x - y * eig).norm() < 1e-15, "{}", s.label());
            }
            let mut prepped = StateVector::init_basis(1, 0).unwrap();
            prepped.apply_gate(&s.prep_gate(0)).unwrap();
            assert!((prepped.inner(&s.state_vector()).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_keeps_epr_pairs() {
        let cfg = ProtocolConfig::ideal(
            ScramblerSpec::identity_control(),
            InputState::ZeroX,
            Pair::Pair1,
        );
        let c = build_protocol_circuit(&cfg).unwrap();
        let mut s = StateVector::init_basis(7, 0).unwrap();
        c.apply_to(&mut s).unwrap();
        // the measured pair leaves the circuit Bell-rotated
        for g in bell_rotation_inverse(1, 3) {
            s.apply_gate(&g).unwrap();
        }
        for &(a, b) in &LAYOUT.epr_pairs {
            assert_abs_diff_eq!(s.epr_probability(a, b).unwrap(), 1.0, epsilon = TOL);
        }
    }

    #[test]
    fn native_reflection_matches_projector() {
        let c = Circuit::from_gates(2, epr_reflection(0, 1)).unwrap();
        let u = c.total_unitary().unwrap();
        let (d, phase) = u.distance_up_to_phase(GateOp::epr_reflect(0, 1).matrix());
        assert!(d < 1e-12);
        assert!((phase - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gate_count_audit() {
        let cfg = ProtocolConfig::ideal(ScramblerSpec::maximal(), InputState::ZeroY, Pair::Pair2);
        let us = build_scrambler(1.0).unwrap().len();
        assert_eq!(build_protocol_circuit(&cfg).unwrap().len(), 1 + 6 + 2 * us + 2);
        let noisy = cfg.with_noise(NoiseConfig::ideal().with_mismatch(0.2, Axis::Y));
        assert_eq!(build_protocol_circuit(&noisy).unwrap().len(), 1 + 6 + 2 * us + 3 + 2);
        let grover = build_protocol_circuit(&cfg.with_decoder(Decoder::Grover)).unwrap();
        assert_eq!(grover.len(), 1 + 6 + 4 * us + 2 * 9);
        let purified = build_protocol_circuit(&cfg.with_decoder(Decoder::GroverPurified)).unwrap();
        assert_eq!(purified.len(), grover.len() + 2);
    }

    #[test]
    fn protocol_circuit_round_trips_through_json() {
        let cfg = ProtocolConfig::ideal(
            ScramblerSpec::interpolating(0.3),
            InputState::OneY,
            Pair::Pair1,
        )
        .with_noise(NoiseConfig::ideal().with_mismatch(0.123456789, Axis::X));
        let c = build_protocol_circuit(&cfg).unwrap();
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn maximal_scrambler_teleports_everything() {
        for pair in Pair::ALL {
            for input in InputState::ALL {
                let r = run_probabilistic(&ProtocolConfig::ideal(ScramblerSpec::maximal(), input, pair))
                    .unwrap();
                assert_abs_diff_eq!(r.p_success, 0.25, epsilon = TOL);
                assert_abs_diff_eq!(r.fidelity.unwrap(), 1.0, epsilon = TOL);
            }
        }
    }

    #[test]
    fn identity_control_pairs() {
        for input in InputState::ALL {
            let id = ScramblerSpec::identity_control();
            let r0 = run_probabilistic(&ProtocolConfig::ideal(id, input, Pair::Pair0)).unwrap();
            assert_abs_diff_eq!(r0.p_success, 0.25, epsilon = TOL);
            assert_abs_diff_eq!(r0.fidelity.unwrap(), 1.0, epsilon = TOL);
            let r1 = run_probabilistic(&ProtocolConfig::ideal(id, input, Pair::Pair1)).unwrap();
            assert_abs_diff_eq!(r1.p_success, 1.0, epsilon = TOL);
            assert_abs_diff_eq!(r1.fidelity.unwrap(), 0.5, epsilon = TOL);
        }
    }

    #[test]
    fn mismatch_control_values() {
        let base = ProtocolConfig::ideal(
            ScramblerSpec::identity_control(),
            InputState::ZeroZ,
            Pair::Pair1,
        );
        let plain = run_probabilistic(&base).unwrap();
        let zero = run_mismatch_control(0.0, &base).unwrap();
        assert_abs_diff_eq!(zero.p_success, plain.p_success, epsilon = TOL);
        assert_abs_diff_eq!(zero.fidelity.unwrap(), plain.fidelity.unwrap(), epsilon = TOL);

        for theta in [0.3, FRAC_PI_2, 2.5] {
            let r = run_mismatch_control(theta, &base).unwrap();
            assert_abs_diff_eq!(r.p_success, (theta / 2.0).cos().powi(2), epsilon = TOL);
            assert_abs_diff_eq!(r.fidelity.unwrap(), 0.5, epsilon = TOL);
        }

        let r = run_mismatch_control(PI, &base).unwrap();
        assert!(r.p_success < 1e-12);
        assert!(!r.fidelity_defined());
        assert_eq!(r.fidelity_times_p(), 0.0);

        let wrong = ProtocolConfig::ideal(ScramblerSpec::maximal(), InputState::ZeroZ, Pair::Pair1);
        assert!(matches!(
            run_mismatch_control(0.1, &wrong),
            Err(ProtocolError::WrongScrambler(_))
        ));
    }

    #[test]
    fn mismatch_runs_stay_pure() {
        let cfg = ProtocolConfig::ideal(ScramblerSpec::identity_control(), InputState::OneY, Pair::Pair2)
            .with_noise(NoiseConfig::ideal().with_mismatch(0.8, Axis::X));
        let program = noisy_program(
            &build_identity_control(),
            cfg.input,
            cfg.pair,
            cfg.decoder,
            &cfg.noise,
        )
        .unwrap();
        assert!(!program.has_channels());
        let Final::Pure(s) = execute(&program).unwrap() else {
            panic!("coherent-only noise must take the pure-state path");
        };
        let rho = DensityMatrix::from_pure(&s).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn grover_decoder_ideal() {
        for spec in [ScramblerSpec::grover_family(), ScramblerSpec::maximal()] {
            for pair in Pair::ALL {
                for input in InputState::ALL {
                    let cfg = ProtocolConfig::ideal(spec, input, pair).with_decoder(Decoder::Grover);
                    let r = run_grover(&cfg, false).unwrap();
                    assert_eq!(r.p_success, 1.0);
                    assert_abs_diff_eq!(r.fidelity.unwrap(), 1.0, epsilon = TOL);
                    let cfg = cfg.with_decoder(Decoder::GroverPurified);
                    let r = run_grover(&cfg, true).unwrap();
                    assert_abs_diff_eq!(r.p_success, 1.0, epsilon = TOL);
                    assert_abs_diff_eq!(r.fidelity.unwrap(), 1.0, epsilon = TOL);
                }
            }
        }
    }

    #[test]
    fn decoder_mismatch_is_rejected() {
        let cfg = ProtocolConfig::ideal(ScramblerSpec::maximal(), InputState::ZeroZ, Pair::Pair0);
        assert!(matches!(
            run_grover(&cfg, false),
            Err(ProtocolError::WrongDecoder { .. })
        ));
        assert!(matches!(
            run_probabilistic(&cfg.with_decoder(Decoder::Grover)),
            Err(ProtocolError::WrongDecoder { .. })
        ));
    }

    #[test]
    fn pure_and_mixed_engines_agree() {
        // a channel with zero strength still forces the density-matrix path
        let scrambler = build_scrambler(0.37).unwrap();
        let unitary = unitary_circuit(
            &scrambler,
            InputState::ZeroY,
            Pair::Pair2,
            Decoder::Probabilistic,
            &NoiseConfig::ideal(),
        )
        .unwrap();
        let pure = NoisyCircuit::from_circuit(&unitary);
        let mut mixed = pure.clone();
        mixed.push(Instruction::Channel(
            crate::simkernel::KrausChannel::identity(vec![0]).unwrap(),
        ));
        let a = project_and_read(execute(&pure).unwrap(), Pair::Pair2, InputState::ZeroY).unwrap();
        let b = project_and_read(execute(&mixed).unwrap(), Pair::Pair2, InputState::ZeroY).unwrap();
        assert_abs_diff_eq!(a.p_success, b.p_success, epsilon = 1e-10);
        assert_abs_diff_eq!(a.fidelity.unwrap(), b.fidelity.unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn sweep_preserves_order_and_isolates_errors() {
        let mut configs = Vec::new();
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for input in InputState::ALL {
                configs.push(ProtocolConfig::ideal(
                    ScramblerSpec::interpolating(alpha),
                    input,
                    Pair::Pair1,
                ));
            }
        }
        configs.push(ProtocolConfig::ideal(
            ScramblerSpec::interpolating(2.0),
            InputState::ZeroX,
            Pair::Pair1,
        ));
        let rows = sweep(&configs);
        assert_eq!(rows.len(), 31);
        for (cfg, (row_cfg, _)) in configs.iter().zip(&rows) {
            assert_eq!(cfg, row_cfg);
        }
        assert!(rows[..30].iter().all(|(_, r)| r.is_ok()));
        assert!(rows[30].1.is_err());
        let again = sweep(&configs);
        for ((_, a), (_, b)) in rows.iter().zip(&again).take(30) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(a.p_success.to_bits(), b.p_success.to_bits());
            assert_eq!(a.fidelity.map(f64::to_bits), b.fidelity.map(f64::to_bits));
        }
    }
}
