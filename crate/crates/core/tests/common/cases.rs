//! Command lines with golden outputs in `tests/golden/`.

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const CASES: &[Case] = &[
    Case {
        name: "space_form",
        args: &["space-form", "--c", "-1", "--n", "3", "--samples", "7"],
        code: 0,
    },
    Case {
        name: "curvature_report",
        args: &[
            "curvature-report",
            "--manifold",
            "custom:ripple:3",
            "--f",
            "logcosh",
            "--t",
            "0.5,1,1.5",
        ],
        code: 0,
    },
    Case {
        name: "curvature_report_sphere",
        args: &[
            "curvature-report",
            "--manifold",
            "space_form:-1:2",
            "--f",
            "tsq",
            "--t",
            "0.5",
            "--base",
            "sphere:0.5:outward",
        ],
        code: 0,
    },
    Case {
        name: "jacobi",
        args: &[
            "jacobi",
            "--manifold",
            "space_form:1:2",
            "--t0",
            "1.2",
            "--trials",
            "10",
            "--seed",
            "7",
        ],
        code: 0,
    },
    Case {
        name: "sphere_profile_cmc",
        args: &["sphere-profile", "--c", "-1", "--n", "2", "--H0", "1"],
        code: 0,
    },
    Case {
        name: "sphere_profile_gk",
        args: &["sphere-profile", "--c", "0", "--n", "3", "--K0", "8"],
        code: 0,
    },
    Case {
        name: "sphere_profile_entire",
        args: &["sphere-profile", "--c", "-1", "--n", "2", "--entire", "--t-end", "5"],
        code: 0,
    },
    Case {
        name: "sphere_profile_none",
        args: &["sphere-profile", "--c", "-1", "--n", "2", "--H0", "0.5"],
        code: 2,
    },
    Case {
        name: "radius",
        args: &["radius", "--c", "-1", "--n", "2", "--H0", "1"],
        code: 0,
    },
    Case {
        name: "threshold",
        args: &["threshold", "--kind", "mean", "--c", "0", "--n", "3", "--r", "0.5"],
        code: 0,
    },
    Case {
        name: "verify",
        args: &[
            "verify",
            "--theorem",
            "1",
            "--m1",
            "space_form:-1:2",
            "--m2",
            "space_form:0:2",
            "--f",
            "tsq",
        ],
        code: 0,
    },
    Case {
        name: "verify_ricci",
        args: &[
            "verify",
            "--theorem",
            "2",
            "--m1",
            "space_form:-1:3",
            "--m2",
            "custom:ripple:3",
            "--f",
            "t",
            "--grid",
            "0.1:2:5",
        ],
        code: 0,
    },
    Case {
        name: "slide",
        args: &[
            "slide",
            "--c",
            "-1",
            "--n",
            "2",
            "--H0",
            "1",
            "--target",
            "space_form:0:2",
            "--candidate",
            "flat",
        ],
        code: 0,
    },
    Case {
        name: "dirichlet",
        args: &[
            "dirichlet",
            "--kind",
            "mean",
            "--manifold",
            "custom:sinh_cubic:2",
            "--r",
            "1",
            "--value",
            "0.5",
        ],
        code: 0,
    },
    Case {
        name: "dirichlet_blowup",
        args: &[
            "dirichlet",
            "--kind",
            "mean",
            "--manifold",
            "space_form:0:2",
            "--r",
            "1",
            "--value",
            "2",
        ],
        code: 2,
    },
    Case {
        name: "sweep",
        args: &[
            "sweep",
            "--quantity",
            "dirichlet",
            "--kind",
            "gk",
            "--manifold",
            "space_form:0:2",
            "--r",
            "1",
            "--values",
            "0.25:1.5:6",
        ],
        code: 0,
    },
    Case {
        name: "run",
        args: &["run", "tests/scenarios/threshold_gk.json"],
        code: 0,
    },
    Case {
        name: "usage_error",
        args: &["radius", "--c", "0"],
        code: 1,
    },
];
