//! Exhaustive and clustered decoding of standard-form CWS codes.
//!
//! Exhaustive screening measures `E M_Q E^dagger` for one representative of
//! every degeneracy class of weight `<= t` until one returns `+1`.
//!
//! Clustered decoding measures, for each size-`t` qubit set `A`, the USt code
//! `Q_A = D_A(Q)` whose group `D_A` is the image under `Cl_G` of all Paulis on
//! `A`, with the codewords as translations. The first `+1` locates the error;
//! `s <= 2t` further measurements, each dropping one generator `d_a` of `D_A`,
//! read off the coefficients of `Cl_G(E)` in that basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{GraphBasisChannel, MeasurementChannel, Outcome};
use crate::counts::{checked_sphere_count, clustered_count, sphere_count};
use crate::error::{Error, Result};
use crate::gf2::{gf2_basis, gf2_basis_indices, BinaryMatrix, BinaryVector};
use crate::graph_code::{enumerate_errors_with_identity, CwsCode};
use crate::pauli::{PauliLetter, PauliOperator};
use crate::ust::{coset_representatives, cws_gate_bound, gate_cost, orthogonalize, GateCost, MeasurementExpr, UstCode};

/// Sorted set of qubit indices (0-indexed internally, printed 1-indexed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster {
    qubits: Vec<usize>,
}

impl Cluster {
    pub fn new(mut qubits: Vec<usize>, n: usize) -> Result<Self> {
        qubits.sort_unstable();
        if qubits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("cluster indices must be distinct".into()));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidInput(format!("cluster qubit {} outside 1..={n}", q + 1)));
        }
        Ok(Self { qubits })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn size(&self) -> usize {
        self.qubits.len()
    }

    /// All size-`t` clusters in lexicographic order.
    pub fn all(n: usize, t: usize) -> Vec<Cluster> {
        (0..n).combinations(t).map(|qubits| Cluster { qubits }).collect()
    }
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.qubits.iter().map(|q| q + 1).join(","))
    }
}

/// Independent images `d_1..d_s` of the single-qubit Paulis on a cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGroup {
    pub cluster: Cluster,
    /// Rows `d_a = Cl_G(sources[a])`.
    pub generators: BinaryMatrix,
    /// The `X_i` or `Z_i` each row came from.
    pub sources: Vec<PauliOperator>,
}

impl ClusterGroup {
    /// `s`, the rank of `D_A`.
    pub fn rank(&self) -> usize {
        self.generators.num_rows()
    }
}

/// Images of `X_i, Z_i` for `i` in the cluster, keeping the independent ones.
pub fn build_cluster_group(code: &CwsCode, cluster: &Cluster) -> Result<ClusterGroup> {
    let n = code.num_qubits();
    let mut candidates = Vec::with_capacity(2 * cluster.size());
    for &q in cluster.qubits() {
        if q >= n {
            return Err(Error::InvalidInput(format!("cluster qubit {} outside 1..={n}", q + 1)));
        }
        candidates.push(PauliOperator::single(n, q, PauliLetter::X));
        candidates.push(PauliOperator::single(n, q, PauliLetter::Z));
    }
    if candidates.is_empty() {
        return Ok(ClusterGroup {
            cluster: cluster.clone(),
            generators: BinaryMatrix::empty(n),
            sources: Vec::new(),
        });
    }
    let images: Vec<BinaryVector> = candidates
        .iter()
        .map(|e| code.classical_map(e))
        .collect::<Result<_>>()?;
    let (generators, kept) = gf2_basis_indices(&images)?;
    Ok(ClusterGroup {
        cluster: cluster.clone(),
        generators,
        sources: kept.into_iter().map(|i| candidates[i].clone()).collect(),
    })
}

/// `M_A`: the USt code with group `D_A` and the codewords as translations.
pub fn cluster_measurement(code: &CwsCode, group: &ClusterGroup) -> Result<MeasurementExpr> {
    UstCode::from_binary(code.graph().clone(), &group.generators, code.codewords())?.measurement()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Clustered,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Clustered => "clustered",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Merge the code's own translation group into every `D_A` and shrink the
    /// translation set to coset representatives.
    pub ust_acceleration: bool,
}

/// A measurement the decoder may perform, with its gate ledger.
#[derive(Clone, Debug)]
pub struct PlannedMeasurement {
    pub id: String,
    pub expr: MeasurementExpr,
    pub cost: GateCost,
    /// `k` and `m` of the USt code being measured.
    pub group_rank: usize,
    pub num_translations: usize,
    /// `2 m (n - k) (n + 3)`.
    pub ust_bound: u64,
    /// `2 K (n - 1) (n + 3)`.
    pub cws_bound: u64,
}

impl PlannedMeasurement {
    fn new(id: String, ust: &UstCode, dimension: usize) -> Result<Self> {
        let expr = ust.measurement()?;
        let cost = gate_cost(&expr);
        let planned = Self {
            id,
            cost,
            group_rank: ust.group_rank(),
            num_translations: ust.num_translations(),
            ust_bound: ust.gate_bound(),
            cws_bound: cws_gate_bound(ust.num_qubits(), dimension),
            expr,
        };
        planned.check_bounds()?;
        Ok(planned)
    }

    /// `2K(n-1)(n+3)` presumes the measured group is non-trivial.
    pub fn cws_bound_applies(&self) -> bool {
        self.group_rank >= 1
    }

    pub fn check_bounds(&self) -> Result<()> {
        let total = self.cost.two_qubit_total;
        if total > self.ust_bound {
            return Err(Error::CostBound {
                cost: total,
                bound: self.ust_bound,
                which: "2m(n-k)(n+3)",
            });
        }
        if self.cws_bound_applies() && total > self.cws_bound {
            return Err(Error::CostBound {
                cost: total,
                bound: self.cws_bound,
                which: "2K(n-1)(n+3)",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ClusterPlan {
    pub group: ClusterGroup,
    pub locate: PlannedMeasurement,
    /// One per generator of `D_A`, each omitting that generator.
    pub refine: Vec<PlannedMeasurement>,
}

#[derive(Clone, Debug)]
pub struct ScreeningEntry {
    pub class: BinaryVector,
    pub representative: PauliOperator,
    pub measurement: PlannedMeasurement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub id: String,
    pub outcome: Outcome,
    pub two_qubit_gates: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeFlag {
    /// Every located-cluster measurement returned `-1`; the final cluster was assumed.
    LastClusterInferred,
    /// The assumed final cluster also returned `-1` on every refinement, which
    /// an error outside the correctable set produces as well.
    AmbiguousRefinement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    pub strategy: Strategy,
    /// `Cl_G` of the error.
    pub identified_class: BinaryVector,
    /// A weight `<= t` Pauli in the identified class; apply it to undo the error.
    pub recovery: PauliOperator,
    pub measurements_used: usize,
    /// `N(n, t)` or `B(n, t)`.
    pub measurement_bound: u64,
    pub gate_total: u64,
    pub max_measurement_gates: u64,
    pub located_cluster: Option<String>,
    pub flags: Vec<DecodeFlag>,
    pub transcript: Vec<TranscriptEntry>,
}

/// Decoder for one code and error weight, with measurement plans built on first use.
pub struct Decoder {
    code: CwsCode,
    t: usize,
    options: DecodeOptions,
    clusters: OnceLock<Result<Vec<ClusterPlan>>>,
    screening: OnceLock<Result<Vec<ScreeningEntry>>>,
}

impl Decoder {
    pub fn new(code: &CwsCode, t: usize, options: DecodeOptions) -> Result<Self> {
        if t > code.num_qubits() {
            return Err(Error::InvalidInput(format!(
                "t = {t} exceeds the code length {}",
                code.num_qubits()
            )));
        }
        let n = code.num_qubits();
        if checked_sphere_count(n, t).is_none_or(|b| b > u64::MAX as u128) {
            return Err(Error::InvalidInput(format!(
                "{n} qubits with t = {t}: measurement counts overflow"
            )));
        }
        Ok(Self {
            code: code.clone(),
            t,
            options,
            clusters: OnceLock::new(),
            screening: OnceLock::new(),
        })
    }

    pub fn code(&self) -> &CwsCode {
        &self.code
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Group generators and translations for the USt code `D(Q)` with
    /// `D = span(rows)`.
    fn ust_for(&self, rows: &[BinaryVector]) -> Result<UstCode> {
        let n = self.code.num_qubits();
        let graph = self.code.graph().clone();
        if self.options.ust_acceleration {
            let periods = self.code.periods();
            let mut all: Vec<BinaryVector> = rows.to_vec();
            all.extend(periods.rows().iter().cloned());
            let group = if all.is_empty() {
                BinaryMatrix::empty(n)
            } else {
                gf2_basis(&all)?
            };
            let reps = coset_representatives(self.code.codewords(), &periods)?;
            UstCode::from_binary(graph, &group, &reps)
        } else {
            let group = BinaryMatrix::from_rows(n, rows.to_vec())?;
            UstCode::from_binary(graph, &group, self.code.codewords())
        }
    }

    fn build_cluster_plan(&self, cluster: &Cluster) -> Result<ClusterPlan> {
        let k_dim = self.code.dimension();
        let group = build_cluster_group(&self.code, cluster)?;
        let rows = group.generators.rows().to_vec();
        let locate = PlannedMeasurement::new(format!("locate{cluster}"), &self.ust_for(&rows)?, k_dim)?;
        let refine = (0..rows.len())
            .map(|a| {
                let subset: Vec<BinaryVector> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| b != a)
                    .map(|(_, r)| r.clone())
                    .collect();
                PlannedMeasurement::new(
                    format!("refine{cluster}:omit={}", group.sources[a]),
                    &self.ust_for(&subset)?,
                    k_dim,
                )
            })
            .collect::<Result<_>>()?;
        Ok(ClusterPlan { group, locate, refine })
    }

    /// Plans for every size-`t` cluster, in lexicographic order.
    pub fn cluster_plans(&self) -> Result<&[ClusterPlan]> {
        self.clusters
            .get_or_init(|| {
                Cluster::all(self.code.num_qubits(), self.t)
                    .par_iter()
                    .map(|c| self.build_cluster_plan(c))
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// One screening measurement per degeneracy class of weight `<= t`,
    /// in enumeration order with the identity first.
    pub fn screening_plan(&self) -> Result<&[ScreeningEntry]> {
        self.screening
            .get_or_init(|| {
                let base = UstCode::from_cws(&self.code)?;
                let expr = base.measurement()?;
                let mut seen = HashMap::new();
                let mut reps = Vec::new();
                for e in enumerate_errors_with_identity(self.code.num_qubits(), self.t) {
                    let class = self.code.classical_map(&e)?;
                    if seen.insert(class.clone(), ()).is_none() {
                        reps.push((class, e));
                    }
                }
                let template = PlannedMeasurement::new(String::new(), &base, self.code.dimension())?;
                reps.into_par_iter()
                    .map(|(class, rep)| {
                        let mut measurement = template.clone();
                        measurement.id = format!("screen[{rep}]");
                        measurement.expr = expr.conjugated(&rep)?;
                        Ok(ScreeningEntry {
                            class,
                            representative: rep,
                            measurement,
                        })
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn decode<C: MeasurementChannel + ?Sized>(&self, strategy: Strategy, channel: &mut C) -> Result<DecodeReport> {
        match strategy {
            Strategy::Exhaustive => self.exhaustive_decode(channel),
            Strategy::Clustered => self.clustered_decode(channel),
        }
    }

    fn check_channel<C: MeasurementChannel + ?Sized>(&self, channel: &C) -> Result<()> {
        if channel.num_qubits() != self.code.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.code.num_qubits(),
                found: channel.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn exhaustive_decode<C: MeasurementChannel + ?Sized>(&self, channel: &mut C) -> Result<DecodeReport> {
        self.check_channel(channel)?;
        let plan = self.screening_plan()?;
        let mut transcript = Vec::new();
        for entry in plan {
            let outcome = channel.measure(&entry.measurement.expr)?;
            transcript.push(TranscriptEntry {
                id: entry.measurement.id.clone(),
                outcome,
                two_qubit_gates: entry.measurement.cost.two_qubit_total,
            });
            if outcome == Outcome::Plus {
                return Ok(self.report(
                    Strategy::Exhaustive,
                    entry.class.clone(),
                    entry.representative.clone(),
                    transcript,
                    None,
                    Vec::new(),
                ));
            }
        }
        Err(Error::Uncorrectable(format!(
            "all {} screening measurements returned -1; the error has weight > {} or the code does not correct it",
            transcript.len(),
            self.t
        )))
    }

    pub fn clustered_decode<C: MeasurementChannel + ?Sized>(&self, channel: &mut C) -> Result<DecodeReport> {
        self.check_channel(channel)?;
        let plans = self.cluster_plans()?;
        let mut transcript = Vec::new();
        let mut flags = Vec::new();
        let mut located = plans.len() - 1;
        for (j, plan) in plans.iter().enumerate() {
            if j + 1 == plans.len() {
                if j > 0 {
                    flags.push(DecodeFlag::LastClusterInferred);
                }
                break;
            }
            let outcome = channel.measure(&plan.locate.expr)?;
            transcript.push(TranscriptEntry {
                id: plan.locate.id.clone(),
                outcome,
                two_qubit_gates: plan.locate.cost.two_qubit_total,
            });
            if outcome == Outcome::Plus {
                located = j;
                break;
            }
        }

        let plan = &plans[located];
        let s = plan.group.rank();
        let mut coefficients = BinaryVector::zeros(s);
        for (a, m) in plan.refine.iter().enumerate() {
            let outcome = channel.measure(&m.expr)?;
            transcript.push(TranscriptEntry {
                id: m.id.clone(),
                outcome,
                two_qubit_gates: m.cost.two_qubit_total,
            });
            // the error class contains d_a iff dropping d_a loses the state
            if outcome == Outcome::Minus {
                coefficients.set(a, true);
            }
        }
        if flags.contains(&DecodeFlag::LastClusterInferred) && s > 0 && coefficients.count_ones() == s {
            flags.push(DecodeFlag::AmbiguousRefinement);
        }

        let class = plan.group.generators.combine(&coefficients);
        let mut product = PauliOperator::identity(self.code.num_qubits());
        for a in coefficients.ones() {
            product = product.multiply(&plan.group.sources[a])?;
        }
        let recovery = PauliOperator::from_letters(&product.letters());
        if self.code.classical_map(&recovery)? != class {
            return Err(Error::Inconsistent(format!(
                "recovery {recovery} does not reproduce class {class}"
            )));
        }
        Ok(self.report(
            Strategy::Clustered,
            class,
            recovery,
            transcript,
            Some(plan.group.cluster.to_string()),
            flags,
        ))
    }

    fn report(
        &self,
        strategy: Strategy,
        identified_class: BinaryVector,
        recovery: PauliOperator,
        transcript: Vec<TranscriptEntry>,
        located_cluster: Option<String>,
        flags: Vec<DecodeFlag>,
    ) -> DecodeReport {
        let n = self.code.num_qubits();
        let bound = match strategy {
            Strategy::Exhaustive => sphere_count(n, self.t),
            Strategy::Clustered => clustered_count(n, self.t),
        };
        DecodeReport {
            strategy,
            identified_class,
            recovery,
            measurements_used: transcript.len(),
            measurement_bound: u64::try_from(bound).unwrap_or(u64::MAX),
            gate_total: transcript.iter().map(|e| e.two_qubit_gates).sum(),
            max_measurement_gates: transcript.iter().map(|e| e.two_qubit_gates).max().unwrap_or(0),
            located_cluster,
            flags,
            transcript,
        }
    }
}

pub fn exhaustive_decode<C: MeasurementChannel + ?Sized>(
    code: &CwsCode,
    t: usize,
    channel: &mut C,
) -> Result<DecodeReport> {
    Decoder::new(code, t, DecodeOptions::default())?.exhaustive_decode(channel)
}

pub fn clustered_decode<C: MeasurementChannel + ?Sized>(
    code: &CwsCode,
    t: usize,
    channel: &mut C,
) -> Result<DecodeReport> {
    Decoder::new(code, t, DecodeOptions::default())?.clustered_decode(channel)
}

/// Stabilizer-code syndrome decoding: measure the `n - k` code stabilizer
/// generators one by one and look the syndrome up.
pub struct SyndromeDecoder {
    code: CwsCode,
    generators: Vec<PauliOperator>,
    table: HashMap<BinaryVector, (BinaryVector, PauliOperator)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeOutcome {
    pub syndrome: BinaryVector,
    pub class: BinaryVector,
    pub recovery: PauliOperator,
    pub measurements_used: usize,
}

impl SyndromeDecoder {
    pub fn new(code: &CwsCode, t: usize) -> Result<Self> {
        if !code.is_additive() {
            return Err(Error::InvalidInput("syndrome decoding needs an additive code".into()));
        }
        let n = code.num_qubits();
        let nonzero: Vec<BinaryVector> = code.codewords().iter().filter(|c| !c.is_zero()).cloned().collect();
        let group: Vec<PauliOperator> = if nonzero.is_empty() {
            Vec::new()
        } else {
            gf2_basis(&nonzero)?
                .rows()
                .iter()
                .cloned()
                .map(PauliOperator::z_type)
                .collect()
        };
        let generators = orthogonalize(&code.stabilizer(), &group)?.code_generators;
        let mut decoder = Self {
            code: code.clone(),
            generators,
            table: HashMap::new(),
        };
        for e in enumerate_errors_with_identity(n, t) {
            let syndrome = decoder.syndrome_of(&e)?;
            if let std::collections::hash_map::Entry::Vacant(slot) = decoder.table.entry(syndrome) {
                slot.insert((code.classical_map(&e)?, e));
            }
        }
        Ok(decoder)
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Anticommutation pattern of `e` with the code stabilizer generators.
    pub fn syndrome_of(&self, e: &PauliOperator) -> Result<BinaryVector> {
        let bits: Vec<bool> = self
            .generators
            .iter()
            .map(|g| g.commutes(e).map(|c| !c))
            .collect::<Result<_>>()?;
        Ok(BinaryVector::from_bits(bits))
    }

    pub fn decode<C: MeasurementChannel + ?Sized>(&self, channel: &mut C) -> Result<SyndromeOutcome> {
        let mut bits = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let outcome = channel.measure(&MeasurementExpr::leaf(g.clone())?)?;
            bits.push(outcome == Outcome::Minus);
        }
        let syndrome = BinaryVector::from_bits(bits);
        let (class, recovery) = self
            .table
            .get(&syndrome)
            .cloned()
            .ok_or_else(|| Error::Uncorrectable(format!("syndrome {syndrome} matches no error of weight <= t")))?;
        Ok(SyndromeOutcome {
            measurements_used: self.generators.len(),
            syndrome,
            class,
            recovery,
        })
    }

    pub fn code(&self) -> &CwsCode {
        &self.code
    }
}

/// Runs clustered and syndrome decoding on every error of weight `<= t` and
/// checks they pick the same degeneracy class.
pub fn syndrome_equivalence_check(code: &CwsCode, t: usize) -> Result<bool> {
    let decoder = Decoder::new(code, t, DecodeOptions::default())?;
    let syndrome = SyndromeDecoder::new(code, t)?;
    let k = code.dimension();
    let amp = Complex64::new(1.0 / (k as f64).sqrt(), 0.0);
    let logical = vec![amp; k];
    for (i, e) in enumerate_errors_with_identity(code.num_qubits(), t).enumerate() {
        let mut ch = GraphBasisChannel::from_code_state(code, &logical, i as u64)?;
        ch.apply_pauli(&e)?;
        let clustered = decoder.clustered_decode(&mut ch)?;
        let mut ch = GraphBasisChannel::from_code_state(code, &logical, i as u64)?;
        ch.apply_pauli(&e)?;
        let by_syndrome = syndrome.decode(&mut ch)?;
        if clustered.identified_class != by_syndrome.class {
            return Ok(false);
        }
    }
    Ok(true)
}
