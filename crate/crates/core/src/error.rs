use thiserror::Error;

/// Errors raised by the engine. Variants map onto the CLI exit-code contract
/// through [`Error::is_budget`] and [`Error::is_usage`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,
    #[error("subset size exceeds word: {size} > {len}")]
    SubsetTooLarge { size: usize, len: usize },
    #[error("not a sub-multiset: {sub} is not contained in {word}")]
    NotSubMultiset { sub: String, word: String },
    #[error("letter not present: {0}")]
    LetterNotPresent(char),
    #[error("invalid word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },
    #[error("split too large: k+1 = {k_plus_one} exceeds word length {len}")]
    SplitTooLarge { k_plus_one: usize, len: usize },
    #[error("right word empty")]
    RightWordEmpty,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("letter {0} must not occur in the tail word")]
    LetterInTail(char),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range (2, 2^31)")]
    ModulusRange(u64),
    #[error("unlucky prime: rank {rank_a} mod {p_a} but {rank_b} mod {p_b}")]
    UnluckyPrime {
        p_a: u64,
        rank_a: usize,
        p_b: u64,
        rank_b: usize,
    },
    #[error("CRT prime list exhausted: need {needed_bits} bits, primes cover {available_bits}")]
    NotEnoughPrimes {
        needed_bits: u64,
        available_bits: u64,
    },
    #[error("budget exceeded: {what} requires {required}, limit is {limit}")]
    Budget {
        what: String,
        required: u64,
        limit: u64,
    },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("spectrum incomplete: non-integer eigenvalues present (multiplicities sum to {found}, N = {n})")]
    SpectrumIncomplete { found: usize, n: usize },
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("letter out of range for a 3-dimensional field: {0}")]
    FieldLetter(char),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    /// Precondition violations that the CLI reports as usage errors.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::EmptyWord
                | Error::SubsetTooLarge { .. }
                | Error::NotSubMultiset { .. }
                | Error::LetterNotPresent(_)
                | Error::ParseWord { .. }
                | Error::SplitTooLarge { .. }
                | Error::RightWordEmpty
                | Error::ParameterOutOfRange(_)
                | Error::LetterInTail(_)
                | Error::NotPrime(_)
                | Error::ModulusRange(_)
                | Error::Profile(_)
                | Error::FieldLetter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
