#pragma once

#include <stdexcept>
#include <string>

namespace hypflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// hyp-core
struct IdentityMap : Error { using Error::Error; };
struct OffGeodesic : Error { using Error::Error; };
struct InvalidMatrix : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// collar-geom
struct NonPositiveLength : Error { using Error::Error; };
struct WidthExceedsEmbedding : Error { using Error::Error; };
struct VerticalLine : Error { using Error::Error; };
struct DegenerateEndpoint : Error { using Error::Error; };

// surface-model
struct UnknownPreset : Error { using Error::Error; };
struct NotHyperbolic : Error { using Error::Error; };
struct ReductionStall : Error { using Error::Error; };
struct SurfaceFileError : Error { using Error::Error; };
struct ArcBuildError : Error { using Error::Error; };

// flow-sim
struct DegenerateHit : Error { using Error::Error; };

// measure-oracle
struct QuadratureFailure : Error { using Error::Error; };
struct BranchBoundaryDegenerate : Error { using Error::Error; };

// stats-harness
struct EmptySample : Error { using Error::Error; };
struct ExperimentAborted : Error { using Error::Error; };

}  // namespace hypflow
