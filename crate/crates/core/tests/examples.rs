//! Runs every example's `main` so the examples stay working.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::main().unwrap();
        }
    };
}

example!(gf3_linear_algebra, "../examples/gf3_linear_algebra.rs");
example!(hadamard_designs, "../examples/hadamard_designs.rs");
example!(lattice_alignment, "../examples/lattice_alignment.rs");
example!(systematic_repair, "../examples/systematic_repair.rs");
example!(parity_repair, "../examples/parity_repair.rs");
example!(file_reconstruction, "../examples/file_reconstruction.rs");
example!(cluster_simulation, "../examples/cluster_simulation.rs");
