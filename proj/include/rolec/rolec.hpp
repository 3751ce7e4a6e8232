#ifndef ROLEC_ROLEC_HPP
#define ROLEC_ROLEC_HPP

// Umbrella header: protocol narrations in, prudent per-role programs out.

#include "rolec/basis.hpp"
#include "rolec/commands.hpp"
#include "rolec/compile.hpp"
#include "rolec/deduction.hpp"
#include "rolec/document.hpp"
#include "rolec/narration.hpp"
#include "rolec/oracle.hpp"
#include "rolec/parse.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/roles.hpp"
#include "rolec/runtime.hpp"
#include "rolec/term.hpp"
#include "rolec/xor_algebra.hpp"

#endif  // ROLEC_ROLEC_HPP
