use pressure_field::fieldio::{read_field, write_scalar, write_vector, LoadedField};
use pressure_field::{Axis, Grid, ScalarField, VectorField};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = Grid> {
    ((1usize..5, 1usize..4, 1usize..3), (0.1f64..10.0, 0.1f64..10.0, 0.1f64..10.0)).prop_filter_map(
        "at least two cells",
        |((nx, ny, nz), (lx, ly, lz))| Grid::new(nx, ny, nz, lx, ly, lz).ok(),
    )
}

fn finite_values(count: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1e12f64..1e12, count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_files_roundtrip_losslessly(grid in grid_strategy(), seed in any::<u64>()) {
        let values: Vec<f64> = {
            let mut rng = pressure_field::sampling::DetRng::new(seed);
            (0..grid.n_cells()).map(|_| rng.gaussian() * 1e3).collect()
        };
        let field = ScalarField::new(grid, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field");
        write_scalar(&path, &field).unwrap();
        match read_field(&path).unwrap() {
            LoadedField::Scalar(s) => {
                prop_assert_eq!(s.grid(), grid);
                prop_assert_eq!(s.values(), field.values());
            }
            _ => prop_assert!(false, "wrong kind"),
        }
    }

    #[test]
    fn vector_files_roundtrip_losslessly(
        grid in grid_strategy(),
        u_seed in any::<u64>(),
    ) {
        let mut rng = pressure_field::sampling::DetRng::new(u_seed);
        let mut gen = |count: usize| (0..count).map(|_| rng.gaussian()).collect::<Vec<f64>>();
        let field = VectorField::new(
            grid,
            gen(grid.n_faces(Axis::X)),
            gen(grid.n_faces(Axis::Y)),
            gen(grid.n_faces(Axis::Z)),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field");
        write_vector(&path, &field).unwrap();
        match read_field(&path).unwrap() {
            LoadedField::Vector(v) => {
                for axis in Axis::ALL {
                    prop_assert_eq!(v.component(axis), field.component(axis));
                }
            }
            _ => prop_assert!(false, "wrong kind"),
        }
    }

    #[test]
    fn scalar_length_errors_never_panic(extra in 1usize..4) {
        let grid = Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap();
        prop_assert!(ScalarField::new(grid, vec![0.0; 2 + extra]).is_err());
    }
}

#[test]
fn finite_values_strategy_is_reasonable() {
    // smoke check for the helper so the strategies above stay honest
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let tree = finite_values(4).new_tree(&mut runner).unwrap();
    assert_eq!(tree.current().len(), 4);
}
