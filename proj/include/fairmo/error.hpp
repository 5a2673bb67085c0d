#pragma once

#include <stdexcept>
#include <string>

namespace fairmo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Schema or configuration does not match the input.
struct SchemaError : Error {
    using Error::Error;
};

// Input data file absent (not bundled; see scripts/fetch_data.py).
struct MissingDataError : Error {
    using Error::Error;
};

// A row violates the schema's value mapping.
struct DataError : Error {
    using Error::Error;
};

// A sensitive attribute ends up with only one group present.
struct DegenerateGroupError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct TrainingError : Error {
    using Error::Error;
};

// Violated precondition of a numerical routine.
struct ContractError : Error {
    using Error::Error;
};

} // namespace fairmo
