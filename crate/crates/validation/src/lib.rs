//! Home of the `acceptance` test target; run it with
//! `cargo test -p vqse-validation --test acceptance`.
