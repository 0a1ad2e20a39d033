use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid action name `{0}`: expected an ASCII letter followed by letters, digits or underscores")]
    InvalidActionName(String),
    #[error("invalid process name `{0}`")]
    InvalidProcessName(String),
    #[error("action `{0}` contains the reserved separator `#`")]
    ReservedSeparatorInAction(String),
    #[error("invalid branch word `{0}`: only the characters 1 and 2 are allowed")]
    InvalidBranchWord(String),

    #[error("reference to unknown process `{0}`")]
    UnknownReference(String),
    #[error("process `{0}` takes part in mutual recursion")]
    MutualRecursion(String),
    #[error("process `{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("name `{0}` is used both as an action and as a process")]
    NameClash(String),
    #[error("unguarded recursion through `{0}`")]
    UnguardedRecursion(String),
    #[error("communication rule `{0}` has tau on its left-hand side")]
    TauInCommRule(String),
    #[error("communication rule `{0}` needs at least two actions on its left-hand side")]
    CommRuleTooSmall(String),
    #[error("allow set contains tau")]
    TauInAllowSet,
    #[error("communication rules `{0}` and `{1}` share actions on their left-hand sides")]
    OverlappingCommRules(String, String),
    #[error("rename maps action `{0}` more than once")]
    RenameNotFunction(String),

    #[error("term is not a basic process (only multi-actions, delta, + and . are allowed)")]
    NotBasicProcess,
    #[error("term is not sequential")]
    NotSequential,
    #[error("action `{0}` is outside the alphabet of the substitution environment")]
    ActionOutsideAlphabet(String),
    #[error("process `{0}` is not syntactically tau-free")]
    NotTauFree(String),

    #[error("state space exceeds {0} states")]
    StateBoundExceeded(usize),

    #[error("{kind} expects {expected} ends, got {got}")]
    ArityMismatch {
        kind: String,
        expected: usize,
        got: usize,
    },
    #[error("node `{0}` is dangling: it needs both incoming and outgoing channel ends, or must be a boundary node with ends on one side only")]
    DanglingNode(String),
    #[error("channel `{0}` is declared twice")]
    DuplicateChannel(String),
    #[error("generated name `{0}` collides with another name in the connector")]
    NameCollision(String),
    #[error("`{0}` is not a channel end of the connector")]
    UnknownEnd(String),

    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
