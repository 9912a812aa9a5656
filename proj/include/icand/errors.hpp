// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <stdexcept>

namespace icand
{

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Capability already present in the registry.
class DuplicateCapabilityError : public Error
{
  public:
    using Error::Error;
};

// Capability not present in the registry.
class UnknownCapabilityError : public Error
{
  public:
    using Error::Error;
};

// Capability is the subject of a live evolution job; registry edits and
// competing submissions must wait for it to reach a terminal state.
class CapabilityBusyError : public Error
{
  public:
    using Error::Error;
};

// Persona edits change the identity hash; callers must acknowledge the
// rekey explicitly or the edit is refused.
class RekeyNotAcknowledgedError : public Error
{
  public:
    using Error::Error;
};

// A manifest field write was attempted while a pipeline transition was
// executing on this thread. The write is recorded, then refused.
class FrozenManifestError : public Error
{
  public:
    using Error::Error;
};

// Internal pipeline invariant breached (double canary entry, missing
// provisional version at promote). The job aborts to the failed state.
class InvariantFaultError : public Error
{
  public:
    using Error::Error;
};

} // namespace icand
