//! The PAS chain around a distribution matcher: Gray labeling, frame
//! assembly with sign-carried extra bits, LDPC coding, QAM mapping and
//! prior-aware LLRs; plus the uniform BICM reference.

mod frame;
mod labeling;
pub mod ldpc;
pub mod llr;
mod qam;

pub use frame::{FrameLayout, PasCodec, PasFrame, ReceiveOutcome, UniformCodec};
pub use labeling::LabelingMap;
pub use ldpc::{perfect_llrs, DecodeOutcome, LdpcCode, MinSumDecoder, ParityCheckMatrix};
pub use llr::{compute_llrs, compute_pam_llrs, LlrBlock, PamConstellation};
pub use qam::{qam_assemble, QamBlock};
