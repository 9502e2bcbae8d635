#pragma once

#include <stdexcept>
#include <string>

namespace gridknot {

// Every precondition failure in the library carries one of these codes so
// callers (and the CLI) can react without parsing message text.
enum class Fault {
    None,
    // arc / knot validation
    NonUnitStep,
    DiagonalStep,
    EndpointOffPlane,
    InteriorOnPlane,
    SelfIntersection,
    TooFewVertices,
    NotClosed,
    NegativeHeight,
    BadStepPattern,  // reduced-arc step lengths out of pattern
    // arc extraction
    NoPlaneContact,
    DisconnectedPlaneContact,
    DegeneratePlaneContact,
    // spin construction
    ZeroRadiusCylinder,
    GluingMismatch,
    NonIntegralAfterTranslation,
    // moves
    CollisionWithComplement,
    // diagrams
    DegenerateProjection,
    // search
    ResourceBudgetExceeded,
    NotFound,
    // io / cli
    BadInput,
};

inline const char* fault_name(Fault f) {
    switch (f) {
        case Fault::None: return "None";
        case Fault::NonUnitStep: return "NonUnitStep";
        case Fault::DiagonalStep: return "DiagonalStep";
        case Fault::EndpointOffPlane: return "EndpointOffPlane";
        case Fault::InteriorOnPlane: return "InteriorOnPlane";
        case Fault::SelfIntersection: return "SelfIntersection";
        case Fault::TooFewVertices: return "TooFewVertices";
        case Fault::NotClosed: return "NotClosed";
        case Fault::NegativeHeight: return "NegativeHeight";
        case Fault::BadStepPattern: return "BadStepPattern";
        case Fault::NoPlaneContact: return "NoPlaneContact";
        case Fault::DisconnectedPlaneContact: return "DisconnectedPlaneContact";
        case Fault::DegeneratePlaneContact: return "DegeneratePlaneContact";
        case Fault::ZeroRadiusCylinder: return "ZeroRadiusCylinder";
        case Fault::GluingMismatch: return "GluingMismatch";
        case Fault::NonIntegralAfterTranslation: return "NonIntegralAfterTranslation";
        case Fault::CollisionWithComplement: return "CollisionWithComplement";
        case Fault::DegenerateProjection: return "DegenerateProjection";
        case Fault::ResourceBudgetExceeded: return "ResourceBudgetExceeded";
        case Fault::NotFound: return "NotFound";
        case Fault::BadInput: return "BadInput";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(Fault fault, std::string message, int index = -1)
        : std::runtime_error(std::string(fault_name(fault)) +
                             (index >= 0 ? " at index " + std::to_string(index) : "") + ": " +
                             message),
          fault_(fault),
          index_(index) {}

    Fault fault() const { return fault_; }
    int index() const { return index_; }  // offending vertex/edge index, or -1

private:
    Fault fault_;
    int index_;
};

}  // namespace gridknot
