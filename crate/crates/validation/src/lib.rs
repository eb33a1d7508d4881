//! Holds the `acceptance` test target, which checks the library end to end
//! and prints one line per criterion. Run it with
//! `cargo test -p prtail-validation --test acceptance`.
