#ifndef RETENTION_RETENTION_HPP
#define RETENTION_RETENTION_HPP

#include "retention/types.hpp"
#include "retention/instance.hpp"
#include "retention/validate.hpp"
#include "retention/process.hpp"
#include "retention/absorption.hpp"
#include "retention/quasistrategy.hpp"
#include "retention/oracle.hpp"

#endif  // RETENTION_RETENTION_HPP
