#pragma once

#include <stdexcept>
#include <string>

namespace halfsphere {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

// Chart map requested for a point too close to the horizon of the chart centre.
class NearHorizon : public Error {
public:
    using Error::Error;
};

class TooFewPoints : public Error {
public:
    using Error::Error;
};

// Points do not span R^{d+1}, or their positive hull is not pointed.
class DegenerateHull : public Error {
public:
    using Error::Error;
};

class IterationLimit : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace halfsphere
