//! Stream circuits.
//!
//! A [`CircuitNetlist`] is a closed network of registers, multipliers,
//! adders and copiers with one designated output end. It runs with
//! synchronous unit-delay semantics: each tick every register emits its
//! contents, the register-free part is evaluated instantly, and then all
//! registers latch their inputs at once.
//!
//! A [`CanonicalCircuit`] is the structured special case given by a feedback
//! matrix `M`, a feedforward row `N` and register initial values `r`. Its
//! output stream is `N (I - XM)^-1 r`, and it is the same thing as a pointed
//! single-output linear system.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{resolvent, Matrix};
use crate::poly::RationalStream;
use crate::scalar::{Field, FieldElement, FieldOps};
use crate::system::{realize, LinearSystem, PointedLinearSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Multiplies its single input by a constant.
    Multiplier(FieldElement),
    /// One-tick delay holding an initial value.
    Register(FieldElement),
    /// Sums its inputs.
    Adder(usize),
    /// Duplicates its input onto several outputs.
    Copier(usize),
}

impl Gate {
    pub fn inputs(&self) -> usize {
        match self {
            Gate::Adder(arity) => *arity,
            _ => 1,
        }
    }

    pub fn outputs(&self) -> usize {
        match self {
            Gate::Copier(fanout) => *fanout,
            _ => 1,
        }
    }

    pub fn is_register(&self) -> bool {
        matches!(self, Gate::Register(_))
    }
}

/// One end of a gate: gate index and port index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub gate: usize,
    pub port: usize,
}

impl End {
    pub fn new(gate: usize, port: usize) -> Self {
        End { gate, port }
    }
}

/// A connection from an output end to an input end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wire {
    pub from: End,
    pub to: End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGate {
    pub name: String,
    pub gate: Gate,
}

/// Gate inventory of a netlist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub registers: usize,
    pub multipliers: usize,
    pub adders: usize,
    pub copiers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitNetlist {
    field: Field,
    gates: Vec<NamedGate>,
    wires: Vec<Wire>,
    output: End,
}

/// Per-netlist wiring tables derived during validation.
struct Wiring {
    /// `drivers[g][p]` is the output end feeding input `p` of gate `g`.
    drivers: Vec<Vec<End>>,
    /// Gates in an order where every non-register gate follows its drivers.
    order: Vec<usize>,
}

impl CircuitNetlist {
    /// Builds and validates a netlist.
    pub fn new(
        field: &Field,
        gates: Vec<NamedGate>,
        wires: Vec<Wire>,
        output: End,
    ) -> Result<Self> {
        let netlist = CircuitNetlist {
            field: field.clone(),
            gates,
            wires,
            output,
        };
        netlist.wiring()?;
        Ok(netlist)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gates(&self) -> &[NamedGate] {
        &self.gates
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    /// The designated external output end.
    pub fn output(&self) -> End {
        self.output
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            match g.gate {
                Gate::Register(_) => counts.registers += 1,
                Gate::Multiplier(_) => counts.multipliers += 1,
                Gate::Adder(_) => counts.adders += 1,
                Gate::Copier(_) => counts.copiers += 1,
            }
        }
        counts
    }

    fn ill(msg: String) -> Error {
        Error::IllFormed(msg)
    }

    fn wiring(&self) -> Result<Wiring> {
        let probe = self.field.zero();
        for g in &self.gates {
            match &g.gate {
                Gate::Multiplier(c) | Gate::Register(c) if !c.same_field(&probe) => {
                    return Err(Error::FieldMismatch(self.field.clone(), c.field()));
                }
                Gate::Adder(k) if *k < 2 => {
                    return Err(Self::ill(format!(
                        "adder {} has arity {k}, need at least 2",
                        g.name
                    )));
                }
                Gate::Copier(k) if *k < 2 => {
                    return Err(Self::ill(format!(
                        "copier {} has fanout {k}, need at least 2",
                        g.name
                    )));
                }
                _ => {}
            }
        }
        let count = self.gates.len();
        let check_end = |end: End, input: bool| -> Result<()> {
            let gate = self
                .gates
                .get(end.gate)
                .ok_or_else(|| Self::ill(format!("wire refers to missing gate {}", end.gate)))?;
            let ports = if input {
                gate.gate.inputs()
            } else {
                gate.gate.outputs()
            };
            if end.port >= ports {
                let side = if input { "input" } else { "output" };
                return Err(Self::ill(format!(
                    "{} has no {side} port {}",
                    gate.name, end.port
                )));
            }
            Ok(())
        };
        check_end(self.output, false)?;

        let mut drivers: Vec<Vec<Option<End>>> = self
            .gates
            .iter()
            .map(|g| vec![None; g.gate.inputs()])
            .collect();
        let mut driven: Vec<Vec<bool>> = self
            .gates
            .iter()
            .map(|g| vec![false; g.gate.outputs()])
            .collect();
        for w in &self.wires {
            check_end(w.from, false)?;
            check_end(w.to, true)?;
            let slot = &mut drivers[w.to.gate][w.to.port];
            if slot.is_some() {
                return Err(Self::ill(format!(
                    "input {} of {} is driven twice",
                    w.to.port, self.gates[w.to.gate].name
                )));
            }
            *slot = Some(w.from);
            let used = &mut driven[w.from.gate][w.from.port];
            if *used {
                return Err(Self::ill(format!(
                    "output {} of {} drives more than one input; use a copier",
                    w.from.port, self.gates[w.from.gate].name
                )));
            }
            *used = true;
        }
        for (g, outs) in driven.iter().enumerate() {
            for (p, &used) in outs.iter().enumerate() {
                let is_output = End::new(g, p) == self.output;
                if used && is_output {
                    return Err(Self::ill(format!(
                        "designated output {} of {} is also wired internally",
                        p, self.gates[g].name
                    )));
                }
                if !used && !is_output {
                    return Err(Self::ill(format!(
                        "output {} of {} is dangling",
                        p, self.gates[g].name
                    )));
                }
            }
        }
        let drivers: Vec<Vec<End>> = drivers
            .into_iter()
            .enumerate()
            .map(|(g, ins)| {
                ins.into_iter()
                    .enumerate()
                    .map(|(p, d)| {
                        d.ok_or_else(|| {
                            Self::ill(format!("input {} of {} is undriven", p, self.gates[g].name))
                        })
                    })
                    .collect::<Result<Vec<End>>>()
            })
            .collect::<Result<_>>()?;

        // Cut every register: edges into a register are dropped, so registers
        // become sources and any remaining cycle is register-free.
        let mut indegree = vec![0usize; count];
        let mut successors: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (g, ins) in drivers.iter().enumerate() {
            if self.gates[g].gate.is_register() {
                continue;
            }
            for d in ins {
                successors[d.gate].push(g);
                indegree[g] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..count).filter(|&g| indegree[g] == 0).collect();
        let mut order = Vec::with_capacity(count);
        while let Some(g) = queue.pop_front() {
            order.push(g);
            for &h in &successors[g] {
                indegree[h] -= 1;
                if indegree[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        if order.len() != count {
            return Err(Self::ill("cycle without a register".into()));
        }
        Ok(Wiring { drivers, order })
    }

    /// The first `steps` values on the output end.
    pub fn simulate(&self, steps: usize) -> Result<Vec<FieldElement>> {
        let Wiring { drivers, order } = self.wiring()?;
        let zero = self.field.zero();
        let mut state: Vec<FieldElement> = self
            .gates
            .iter()
            .map(|g| match &g.gate {
                Gate::Register(init) => init.clone(),
                _ => zero.clone(),
            })
            .collect();
        let mut values: Vec<Vec<FieldElement>> = self
            .gates
            .iter()
            .map(|g| vec![zero.clone(); g.gate.outputs()])
            .collect();
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            for &g in &order {
                let input = |p: usize| {
                    let d = drivers[g][p];
                    values[d.gate][d.port].clone()
                };
                let result = match &self.gates[g].gate {
                    Gate::Register(_) => state[g].clone(),
                    Gate::Multiplier(c) => c.mul(&input(0)),
                    Gate::Adder(k) => (0..*k).fold(zero.clone(), |acc, p| acc.add(&input(p))),
                    Gate::Copier(_) => input(0),
                };
                for v in values[g].iter_mut() {
                    *v = result.clone();
                }
            }
            out.push(values[self.output.gate][self.output.port].clone());
            for (g, named) in self.gates.iter().enumerate() {
                if named.gate.is_register() {
                    let d = drivers[g][0];
                    state[g] = values[d.gate][d.port].clone();
                }
            }
        }
        Ok(out)
    }

    /// Places a register holding `init` in front of the output, turning the
    /// observed stream `s` into `init : s`.
    pub fn with_output_register(&self, init: FieldElement) -> Result<Self> {
        let mut gates = self.gates.clone();
        let mut name = String::from("delay");
        while gates.iter().any(|g| g.name == name) {
            name.push('_');
        }
        gates.push(NamedGate {
            name,
            gate: Gate::Register(init),
        });
        let reg = gates.len() - 1;
        let mut wires = self.wires.clone();
        wires.push(Wire {
            from: self.output,
            to: End::new(reg, 0),
        });
        Self::new(&self.field, gates, wires, End::new(reg, 0))
    }
}

/// Registers with feedback `M` (`n x n`), feedforward `N` (`1 x n`) and
/// initial contents `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCircuit {
    feedback: Matrix<FieldElement>,
    feedforward: Matrix<FieldElement>,
    initial: Vec<FieldElement>,
}

impl CanonicalCircuit {
    pub fn new(
        feedback: Matrix<FieldElement>,
        feedforward: Matrix<FieldElement>,
        initial: Vec<FieldElement>,
    ) -> Result<Self> {
        let n = feedback.rows();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "a circuit needs at least one register".into(),
            ));
        }
        if !feedback.is_square()
            || feedforward.rows() != 1
            || feedforward.cols() != n
            || initial.len() != n
        {
            return Err(Error::DimensionMismatch(format!(
                "expected M {n}x{n}, N 1x{n}, r of length {n}; got M {}x{}, N {}x{}, r of length {}",
                feedback.rows(),
                feedback.cols(),
                feedforward.rows(),
                feedforward.cols(),
                initial.len()
            )));
        }
        let field = feedback.field().clone();
        if *feedforward.field() != field {
            return Err(Error::FieldMismatch(field, feedforward.field().clone()));
        }
        let probe = field.zero();
        if let Some(bad) = initial.iter().find(|c| !c.same_field(&probe)) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(CanonicalCircuit {
            feedback,
            feedforward,
            initial,
        })
    }

    pub fn field(&self) -> &Field {
        self.feedback.field()
    }

    /// Number of registers.
    pub fn registers(&self) -> usize {
        self.initial.len()
    }

    pub fn feedback(&self) -> &Matrix<FieldElement> {
        &self.feedback
    }

    pub fn feedforward(&self) -> &Matrix<FieldElement> {
        &self.feedforward
    }

    pub fn initial(&self) -> &[FieldElement] {
        &self.initial
    }

    /// `N (I - XM)^-1 r`.
    pub fn behaviour(&self) -> RationalStream {
        let res = resolvent(&self.feedback).expect("I - XM is invertible over k(X)");
        let r: Vec<RationalStream> = self
            .initial
            .iter()
            .cloned()
            .map(RationalStream::constant)
            .collect();
        let state = res.mul_vec(&r).expect("conformant");
        self.feedforward
            .row(0)
            .iter()
            .zip(&state)
            .fold(RationalStream::zero(self.field()), |acc, (c, s)| {
                acc.add(&s.scale(c))
            })
    }

    /// Gate-level expansion: register `j` feeds a copier with `n + 1`
    /// outputs; copy `i < n` goes through the multiplier `M[i][j]` into the
    /// adder feeding register `i`, and copy `n` goes through `N[j]` into the
    /// output adder. With a single register the adders are omitted.
    pub fn to_netlist(&self) -> CircuitNetlist {
        let n = self.registers();
        let field = self.field().clone();
        let mut gates = Vec::new();
        let mut add = |name: String, gate: Gate| {
            gates.push(NamedGate { name, gate });
            gates.len() - 1
        };
        let regs: Vec<usize> = (0..n)
            .map(|j| {
                add(
                    format!("r{}", j + 1),
                    Gate::Register(self.initial[j].clone()),
                )
            })
            .collect();
        let copiers: Vec<usize> = (0..n)
            .map(|j| add(format!("c{}", j + 1), Gate::Copier(n + 1)))
            .collect();
        let feedback: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        add(
                            format!("m{}_{}", i + 1, j + 1),
                            Gate::Multiplier(self.feedback[(i, j)].clone()),
                        )
                    })
                    .collect()
            })
            .collect();
        let forward: Vec<usize> = (0..n)
            .map(|j| {
                add(
                    format!("n{}", j + 1),
                    Gate::Multiplier(self.feedforward[(0, j)].clone()),
                )
            })
            .collect();
        let (adders, out_adder) = if n > 1 {
            let adders: Vec<usize> = (0..n)
                .map(|i| add(format!("a{}", i + 1), Gate::Adder(n)))
                .collect();
            (Some(adders), Some(add("out".into(), Gate::Adder(n))))
        } else {
            (None, None)
        };

        let mut wires = Vec::new();
        let mut wire = |from: End, to: End| wires.push(Wire { from, to });
        for j in 0..n {
            wire(End::new(regs[j], 0), End::new(copiers[j], 0));
            for i in 0..n {
                wire(End::new(copiers[j], i), End::new(feedback[i][j], 0));
            }
            wire(End::new(copiers[j], n), End::new(forward[j], 0));
        }
        let output = match (&adders, out_adder) {
            (Some(adders), Some(out_adder)) => {
                for i in 0..n {
                    for j in 0..n {
                        wire(End::new(feedback[i][j], 0), End::new(adders[i], j));
                    }
                    wire(End::new(adders[i], 0), End::new(regs[i], 0));
                    wire(End::new(forward[i], 0), End::new(out_adder, i));
                }
                End::new(out_adder, 0)
            }
            _ => {
                wire(End::new(feedback[0][0], 0), End::new(regs[0], 0));
                End::new(forward[0], 0)
            }
        };
        CircuitNetlist::new(&field, gates, wires, output).expect("canonical layout is well formed")
    }

    /// `F = M`, `H = N`, `v0 = r`.
    pub fn to_linear_system(&self) -> PointedLinearSystem {
        let sys = LinearSystem::new(self.feedback.clone(), self.feedforward.clone())
            .expect("shapes checked");
        PointedLinearSystem::new(sys, self.initial.clone()).expect("shapes checked")
    }

    /// Inverse of [`CanonicalCircuit::to_linear_system`]; needs one output
    /// and at least one state.
    pub fn from_linear_system(sys: &PointedLinearSystem) -> Result<Self> {
        if sys.system().outputs() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "a circuit has one output, the system has {}",
                sys.system().outputs()
            )));
        }
        CanonicalCircuit::new(
            sys.system().dynamics().clone(),
            sys.system().output().clone(),
            sys.initial().to_vec(),
        )
    }

    /// A circuit with the given output stream: the minimal realization of
    /// `s`. The zero stream has a zero-dimensional realization, which is
    /// replaced by one register holding zero.
    pub fn synthesize(s: &RationalStream) -> Self {
        let realized = realize(core::slice::from_ref(s)).expect("one stream");
        if realized.dim() == 0 {
            let field = s.field();
            return CanonicalCircuit {
                feedback: Matrix::zeros(field, 1, 1),
                feedforward: Matrix::zeros(field, 1, 1),
                initial: vec![field.zero()],
            };
        }
        Self::from_linear_system(&realized).expect("single output, positive dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn q() -> Field {
        Field::Rationals
    }

    fn ints(rows: &[&[i64]]) -> Matrix<FieldElement> {
        Matrix::from_rows(
            &q(),
            rows.iter()
                .map(|r| r.iter().map(|&v| q().int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn vecq(v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&c| q().int(c)).collect()
    }

    fn named(name: &str, gate: Gate) -> NamedGate {
        NamedGate {
            name: name.into(),
            gate,
        }
    }

    fn wire(a: (usize, usize), b: (usize, usize)) -> Wire {
        Wire {
            from: End::new(a.0, a.1),
            to: End::new(b.0, b.1),
        }
    }

    fn example() -> CanonicalCircuit {
        CanonicalCircuit::new(ints(&[&[0, -1], &[1, 2]]), ints(&[&[1, 2]]), vecq(&[1, 0])).unwrap()
    }

    #[test]
    fn example_counts_naturals() {
        let c = example();
        assert_eq!(c.to_netlist().simulate(5).unwrap(), vecq(&[1, 2, 3, 4, 5]));
        let one = Polynomial::one(&q());
        let expected = RationalStream::new(one, Polynomial::from_ints(&q(), &[1, -2, 1])).unwrap();
        assert_eq!(c.behaviour(), expected);
    }

    #[test]
    fn example_gate_inventory() {
        let counts = example().to_netlist().gate_counts();
        assert_eq!(
            counts,
            GateCounts {
                registers: 2,
                multipliers: 6,
                adders: 3,
                copiers: 2
            }
        );
    }

    #[test]
    fn register_with_zero_feedback() {
        // register -> copier; one copy is the output, the other goes through
        // a 0-multiplier back into the register.
        let gates = vec![
            named("r", Gate::Register(q().int(7))),
            named("c", Gate::Copier(2)),
            named("m", Gate::Multiplier(q().zero())),
        ];
        let wires = vec![
            wire((0, 0), (1, 0)),
            wire((1, 1), (2, 0)),
            wire((2, 0), (0, 0)),
        ];
        let net = CircuitNetlist::new(&q(), gates, wires, End::new(1, 0)).unwrap();
        assert_eq!(net.simulate(4).unwrap(), vecq(&[7, 0, 0, 0]));
    }

    #[test]
    fn self_loop_repeats_initial_value() {
        let c = CanonicalCircuit::new(ints(&[&[1]]), ints(&[&[1]]), vecq(&[3])).unwrap();
        let net = c.to_netlist();
        assert_eq!(net.gate_counts().adders, 0);
        assert_eq!(net.simulate(4).unwrap(), vecq(&[3, 3, 3, 3]));
        assert_eq!(
            c.behaviour(),
            RationalStream::geometric(q().one()).scale(&q().int(3))
        );
    }

    #[test]
    fn scalar_feedback_is_geometric() {
        let c = CanonicalCircuit::new(ints(&[&[5]]), ints(&[&[1]]), vecq(&[1])).unwrap();
        assert_eq!(c.behaviour(), RationalStream::geometric(q().int(5)));
        let zero = CanonicalCircuit::new(ints(&[&[5]]), ints(&[&[1]]), vecq(&[0])).unwrap();
        assert!(zero.behaviour().is_zero());
    }

    #[test]
    fn output_register_delays() {
        let net = example()
            .to_netlist()
            .with_output_register(q().int(9))
            .unwrap();
        assert_eq!(net.simulate(4).unwrap(), vecq(&[9, 1, 2, 3]));
    }

    #[test]
    fn linear_system_round_trip() {
        let c = example();
        let sys = c.to_linear_system();
        assert_eq!(sys.system().dynamics(), &ints(&[&[0, -1], &[1, 2]]));
        assert_eq!(CanonicalCircuit::from_linear_system(&sys).unwrap(), c);
        assert_eq!(sys.behaviour().unwrap()[0], c.behaviour());

        let empty = realize(&[RationalStream::zero(&q())]).unwrap();
        assert!(matches!(
            CanonicalCircuit::from_linear_system(&empty),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn synthesis_reproduces_stream() {
        let s = RationalStream::new(
            Polynomial::from_ints(&q(), &[2, -1]),
            Polynomial::from_ints(&q(), &[1, -2, 1]),
        )
        .unwrap();
        let c = CanonicalCircuit::synthesize(&s);
        assert_eq!(c.behaviour(), s);
        assert_eq!(c.to_netlist().simulate(8).unwrap(), s.expand(8));
        let z = CanonicalCircuit::synthesize(&RationalStream::zero(&q()));
        assert_eq!(z.to_netlist().simulate(3).unwrap(), vecq(&[0, 0, 0]));
    }

    #[test]
    fn rejects_ill_formed_netlists() {
        // Two multipliers in a loop with no register.
        let gates = vec![
            named("a", Gate::Multiplier(q().one())),
            named("c", Gate::Copier(2)),
        ];
        let wires = vec![wire((0, 0), (1, 0)), wire((1, 1), (0, 0))];
        let err = CircuitNetlist::new(&q(), gates, wires, End::new(1, 0)).unwrap_err();
        assert!(matches!(err, Error::IllFormed(_)));

        // Undriven register input.
        let gates = vec![named("r", Gate::Register(q().one()))];
        assert!(CircuitNetlist::new(&q(), gates, vec![], End::new(0, 0)).is_err());

        // Adder of arity one.
        let gates = vec![
            named("r", Gate::Register(q().one())),
            named("a", Gate::Adder(1)),
        ];
        let wires = vec![wire((0, 0), (1, 0)), wire((1, 0), (0, 0))];
        assert!(CircuitNetlist::new(&q(), gates, wires, End::new(0, 0)).is_err());

        // Dangling copier output.
        let gates = vec![
            named("r", Gate::Register(q().one())),
            named("c", Gate::Copier(3)),
        ];
        let wires = vec![wire((0, 0), (1, 0)), wire((1, 1), (0, 0))];
        assert!(CircuitNetlist::new(&q(), gates, wires, End::new(1, 0)).is_err());
    }

    #[test]
    fn canonical_shapes_are_checked() {
        assert!(CanonicalCircuit::new(ints(&[&[1]]), ints(&[&[1, 2]]), vecq(&[1])).is_err());
        assert!(CanonicalCircuit::new(
            Matrix::zeros(&q(), 0, 0),
            Matrix::zeros(&q(), 1, 0),
            vec![]
        )
        .is_err());
    }
}
