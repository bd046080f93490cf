//! Column layout of every CSV table in a run directory. Writers check their header
//! against this list, and `schema.json` is generated from it.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TableSchema {
    pub file: &'static str,
    pub description: &'static str,
    pub columns: &'static [Column],
}

const fn col(name: &'static str, description: &'static str) -> Column {
    Column { name, description }
}

pub const EIGENFUNCTION: TableSchema = TableSchema {
    file: "eigenfunction.csv",
    description: "generalized eigenfunctions on the eigen grid, normalized by phi(0) = 1",
    columns: &[
        col("mode", "index of the mode in the superposition"),
        col("lambda", "eigenvalue of the mode"),
        col("x", "node"),
        col("phi", "eigenfunction"),
        col("dphi", "derivative of the eigenfunction"),
        col("a", "coefficient a(x)"),
        col("lhs", "A(x) dphi^2, left side of the gradient bound"),
        col("rhs", "alpha a(x) phi^2, right side of the gradient bound"),
    ],
};

pub const PROFILE_SUPER: TableSchema = TableSchema {
    file: "profile_super.csv",
    description: "heteroclinic of U'' + cU' + g1(U) = 0 in the normalized coordinate",
    columns: &[
        col("s", "normalized coordinate, U e^(sqrt(alpha) s) -> 1"),
        col("U", "profile"),
        col("V", "U'"),
    ],
};

pub const PROFILE_SUB: TableSchema = TableSchema {
    file: "profile_sub.csv",
    description: "heteroclinic of U'' + cU' + g0(U) = 0 in the normalized coordinate",
    columns: &[
        col("s", "normalized coordinate, U e^(sqrt(alpha) s) -> 1"),
        col("U", "profile"),
        col("V", "U'"),
    ],
};

pub const TRANSFORMS: TableSchema = TableSchema {
    file: "transforms.csv",
    description: "transforms h (super) and h_tilde (sub) on a geometric v grid",
    columns: &[
        col("v", "argument"),
        col("h", "super transform, linear continuation above v_max"),
        col("h_tilde", "sub transform"),
        col("h_pp", "second derivative of h"),
        col("h_tilde_pp", "second derivative of h_tilde"),
    ],
};

pub const SNAPSHOTS: TableSchema = TableSchema {
    file: "snapshots.csv",
    description: "numerical solution and envelopes at the output times, every stride-th node",
    columns: &[
        col("t", "time"),
        col("x", "node"),
        col("u", "numerical solution"),
        col("w_tilde", "lower envelope h_tilde(v)"),
        col("w_clamped", "upper envelope min(h(v), 1)"),
    ],
};

pub const DIAGNOSTICS: TableSchema = TableSchema {
    file: "diagnostics.csv",
    description: "front position, width and speed at the output times",
    columns: &[
        col("t", "time"),
        col("X", "rightmost crossing of u = 1/2"),
        col("width_eps", "distance between the crossings of 1 - eps and eps"),
        col("speed_window", "centered difference quotient of X"),
    ],
};

pub const SWEEP: TableSchema = TableSchema {
    file: "sweep.csv",
    description: "one row per sweep value",
    columns: &[
        col("value", "value of the swept parameter"),
        col("lambda", "largest lambda used"),
        col("speed", "least-squares slope of X(t)"),
        col("max_width", "largest measured eps-width"),
        col("width_bound", "width bound of the selected form"),
        col("worst_sandwich", "worst sandwich margin"),
        col("passed", "true when every gate and certificate passed"),
        col("error", "error message of a failed variant"),
    ],
};

pub const TABLES: [TableSchema; 7] = [
    EIGENFUNCTION,
    PROFILE_SUPER,
    PROFILE_SUB,
    TRANSFORMS,
    SNAPSHOTS,
    DIAGNOSTICS,
    SWEEP,
];

impl TableSchema {
    pub fn header(&self) -> Vec<&'static str> {
        self.columns.iter().map(|c| c.name).collect()
    }
}
