macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect("example should run");
        }
    };
}

example!(killed_potential);
example!(triple_law);
example!(reflected_potential);
example!(exit_laws);
example!(mc_check);
example!(tabulate_csv);
example!(special_functions);
example!(verify_identities);
