// SPDX-License-Identifier: Apache-2.0

//! Single-qubit Pauli eigenstates and how the Clifford gates permute them.

use serde::Serialize;

use crate::ir::GateName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PauliState {
    #[serde(rename = "Z+")]
    ZPlus,
    #[serde(rename = "Z-")]
    ZMinus,
    #[serde(rename = "X+")]
    XPlus,
    #[serde(rename = "X-")]
    XMinus,
    #[serde(rename = "Y+")]
    YPlus,
    #[serde(rename = "Y-")]
    YMinus,
}

impl PauliState {
    pub const ALL: [PauliState; 6] = [
        PauliState::ZPlus,
        PauliState::ZMinus,
        PauliState::XPlus,
        PauliState::XMinus,
        PauliState::YPlus,
        PauliState::YMinus,
    ];

    /// Measurement outcome in the computational basis, if deterministic.
    pub fn z_outcome(self) -> Option<i64> {
        match self {
            PauliState::ZPlus => Some(0),
            PauliState::ZMinus => Some(1),
            _ => None,
        }
    }

    fn flip(self) -> PauliState {
        use PauliState::*;
        match self {
            ZPlus => ZMinus,
            ZMinus => ZPlus,
            XPlus => XMinus,
            XMinus => XPlus,
            YPlus => YMinus,
            YMinus => YPlus,
        }
    }

    fn is_z(self) -> bool {
        matches!(self, PauliState::ZPlus | PauliState::ZMinus)
    }

    fn is_x(self) -> bool {
        matches!(self, PauliState::XPlus | PauliState::XMinus)
    }

    fn is_y(self) -> bool {
        matches!(self, PauliState::YPlus | PauliState::YMinus)
    }
}

/// State after applying `gate`, or `None` when `gate` is not one of the
/// tracked single-qubit Cliffords (I, X, Y, Z, H, S).
pub fn pauli_transition(gate: GateName, state: PauliState) -> Option<PauliState> {
    use PauliState::*;
    Some(match gate {
        GateName::I => state,
        // A Pauli fixes its own axis and flips the other two.
        GateName::X if state.is_x() => state,
        GateName::Y if state.is_y() => state,
        GateName::Z if state.is_z() => state,
        GateName::X | GateName::Y | GateName::Z => state.flip(),
        GateName::H => match state {
            ZPlus => XPlus,
            ZMinus => XMinus,
            XPlus => ZPlus,
            XMinus => ZMinus,
            YPlus => YMinus,
            YMinus => YPlus,
        },
        GateName::S => match state {
            XPlus => YPlus,
            XMinus => YMinus,
            YPlus => XMinus,
            YMinus => XPlus,
            z => z,
        },
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliState::*;

    #[test]
    fn examples() {
        assert_eq!(pauli_transition(GateName::X, ZPlus), Some(ZMinus));
        assert_eq!(pauli_transition(GateName::H, ZPlus), Some(XPlus));
        assert_eq!(pauli_transition(GateName::S, XPlus), Some(YPlus));
        assert_eq!(pauli_transition(GateName::Z, XPlus), Some(XMinus));
        assert_eq!(pauli_transition(GateName::T, ZPlus), None);
    }

    #[test]
    fn gate_orders_return_to_start() {
        for s in PauliState::ALL {
            let mut t = s;
            for _ in 0..4 {
                t = pauli_transition(GateName::S, t).unwrap();
            }
            assert_eq!(t, s);
            for g in [GateName::X, GateName::Y, GateName::Z, GateName::H] {
                let twice = pauli_transition(g, pauli_transition(g, s).unwrap()).unwrap();
                assert_eq!(twice, s);
            }
        }
    }
}
