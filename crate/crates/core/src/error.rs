use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by constructors and bounded searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MedianError {
    DimensionOutOfRange {
        dim: usize,
        max: usize,
    },
    SizeOverflow {
        requested: usize,
        max: usize,
    },
    EmptyCarrier,
    Malformed {
        reason: String,
    },
    /// `axiom` is one of "M1", "M2", "M3"; `elements` is the witnessing
    /// triple or quadruple.
    AxiomViolation {
        axiom: &'static str,
        elements: Vec<usize>,
    },
    MalformedEdge {
        edge: (usize, usize),
        reason: &'static str,
    },
    Disconnected {
        unreachable: usize,
    },
    NotMedianGraph {
        triple: [usize; 3],
        candidates: usize,
    },
    NotClosed {
        triple: [usize; 3],
    },
    ClosureTooLarge {
        max: usize,
    },
    ElementOutOfRange {
        element: usize,
        n: usize,
    },
    DegeneratePair {
        element: usize,
    },
    NotAChainInterval {
        x: usize,
        y: usize,
    },
    NotConvex,
    CarrierMismatch {
        left: usize,
        right: usize,
    },
    NotACover,
    TooManyWalls {
        walls: usize,
        max: usize,
    },
    ComparabilityViolation {
        walls: (usize, usize),
    },
    NotIsolated {
        element: usize,
    },
    InternalConsistency {
        reason: &'static str,
    },
    Parse {
        input: String,
        reason: &'static str,
    },
}

impl fmt::Display for MedianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MedianError::*;
        match self {
            DimensionOutOfRange { dim, max } => {
                write!(f, "dimension {dim} out of range (max {max})")
            }
            SizeOverflow { requested, max } => {
                write!(f, "carrier size {requested} exceeds bound {max}")
            }
            EmptyCarrier => write!(f, "empty carrier"),
            Malformed { reason } => write!(f, "malformed input: {reason}"),
            AxiomViolation { axiom, elements } => {
                write!(f, "axiom {axiom} violated at {elements:?}")
            }
            MalformedEdge { edge, reason } => {
                write!(f, "malformed edge [{}, {}]: {reason}", edge.0, edge.1)
            }
            Disconnected { unreachable } => {
                write!(f, "graph is disconnected: vertex {unreachable} unreachable from 0")
            }
            NotMedianGraph { triple, candidates } => write!(
                f,
                "not a median graph: triple {triple:?} has {candidates} points in the triple interval intersection"
            ),
            NotClosed { triple } => write!(f, "subset not median-closed at triple {triple:?}"),
            ClosureTooLarge { max } => write!(f, "median closure exceeds {max} elements"),
            ElementOutOfRange { element, n } => {
                write!(f, "element {element} out of range for carrier of size {n}")
            }
            DegeneratePair { element } => {
                write!(f, "degenerate pair ({element}, {element}): branch would be empty")
            }
            NotAChainInterval { x, y } => write!(f, "interval [{x}, {y}] is not a chain"),
            NotConvex => write!(f, "subset is not convex"),
            CarrierMismatch { left, right } => {
                write!(f, "carrier mismatch: {left} vs {right} elements")
            }
            NotACover => write!(f, "family does not cover the carrier"),
            TooManyWalls { walls, max } => write!(f, "{walls} walls exceed bound {max}"),
            ComparabilityViolation { walls } => {
                write!(f, "separating walls {} and {} neither cross nor nest", walls.0, walls.1)
            }
            NotIsolated { element } => {
                write!(f, "element {element} has a non-singleton minimal neighbourhood")
            }
            InternalConsistency { reason } => write!(f, "internal consistency error: {reason}"),
            Parse { input, reason } => write!(f, "cannot parse {input:?}: {reason}"),
        }
    }
}

impl core::error::Error for MedianError {}

/// A counterexample found by a verification routine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub reason: String,
    /// Elements (carrier indices) that witness the failure.
    pub elements: Vec<usize>,
}

impl Violation {
    pub fn new(reason: impl Into<String>, elements: Vec<usize>) -> Self {
        Violation { reason: reason.into(), elements }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.reason, self.elements)
    }
}

impl From<MedianError> for Violation {
    fn from(e: MedianError) -> Self {
        Violation::new(alloc::format!("{e}"), Vec::new())
    }
}
