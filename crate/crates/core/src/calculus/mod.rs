//! Reduction and factorization calculi for transvections over `Z` and `Z/2`.

pub mod boxops;
pub mod lambda;
pub mod orthogonal;
pub mod witness;

pub use boxops::{
    box_minus, box_plus, factor_square_transvection, has_block_shape, is_delta_vector, is_negative_x_unit,
    reduce_blocks, reduce_to_delta, BoxMove, BoxOp, ConjugatorFactor, ReductionCert, SquareTransvectionFactor,
};
pub use lambda::{
    lambda_reduce, lambda_reduce_to_base, square_op, z2_transvection, LambdaGenerator, LambdaReduction, LambdaVec,
    SquareMove,
};
pub use orthogonal::{factor_into_z2_transvections, factor_orthogonal, transvection_product, OrthWord};
pub use witness::{orbit_witness, witness_targets, OrbitWitness};
