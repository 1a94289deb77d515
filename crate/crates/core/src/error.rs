use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("the two primes must be distinct (got {0} twice)")]
    EqualPrimes(u64),

    #[error("modulus {s}*{p} does not fit below 2^62")]
    ModulusOverflow { s: u64, p: u64 },

    #[error("operation needs {needed} elements but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("{value} is out of range (must be below {bound})")]
    OutOfRange { value: u64, bound: u64 },

    #[error("component {value} is not divisible by {prime}")]
    NotDivisible { value: u64, prime: u64 },

    #[error("{0} is an excluded zero element of the group")]
    ExcludedElement(u64),

    #[error("{0} is not a member of the group")]
    NotInGroup(u64),

    #[error("domain is not closed under squaring: {value}^2 = {square} is missing")]
    NotClosed { value: u64, square: u64 },

    #[error("{0} is not a cyclic element of the squaring map")]
    NotCyclic(u64),

    #[error("{0} is not a node of the tree")]
    NotInTree(u64),

    #[error("arc length {arc} does not match tree height {tree}")]
    HeightMismatch { arc: usize, tree: usize },

    #[error("arc node {0} shares a factor with the modulus")]
    ZeroDivisorArc(u64),

    #[error("sequence is not a cycle of the {0} embedded field")]
    NotAFieldCycle(&'static str),

    #[error("sequence is not a cycle of the squaring map")]
    NotACycle,

    #[error("{0} has no usable square roots")]
    NoSquareRoots(u64),

    #[error("{x}^2 and {y}^2 differ modulo {modulus}")]
    NotACollision { x: u64, y: u64, modulus: u64 },

    #[error("{0} is not a valid composite modulus for this attack")]
    BadModulus(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
