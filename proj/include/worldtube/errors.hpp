#pragma once

#include <stdexcept>
#include <string>

namespace worldtube {

/** An argument violated a documented precondition. */
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/** The shell would reach outside the Rindler wedge (eps * a_c >= 1). */
class WedgeViolation : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/** A field point lies inside (or on) the world tube. */
class InteriorPointError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/** The field point is outside the causal future of the worldline. */
class HorizonError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/** The field point lies on the source worldline. */
class OnWorldlineError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/** A quadrature produced a non-finite value or failed a convergence check. */
class IntegrationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace worldtube
