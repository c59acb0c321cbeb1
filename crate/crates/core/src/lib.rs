//! Query expansion from pseudo-relevant web documents.
//!
//! Candidate expansion terms are mined from the top pages returned by one or
//! more search engines and pass through three weighting stages: corpus-level
//! tf-itf ranking, iterative nearest-neighbour selection by cosine
//! similarity, and reweighting by correlation with the whole query. The
//! crate also ships a small inverted-index search engine and a trec_eval
//! compatible metric suite for judging the reformulated queries.

pub mod evaluation;
pub mod expansion;
pub mod retrieval;
pub mod textproc;
pub mod websource;
