//! Every example runs to completion.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(projection_rules);
example!(tensor_spaces);
example!(first_and_second_kind);
example!(nonideal_povm);
example!(epr_preparation);
example!(detector_efficiency);
example!(tomography_check);
example!(scenario_run);
