pub mod cli;
pub mod hmm;
pub mod phase;
pub mod qmax;
pub mod qsim;
pub mod qviterbi;
pub mod viterbi;
pub mod zx;
