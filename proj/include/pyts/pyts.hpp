#ifndef PYTS_PYTS_HPP
#define PYTS_PYTS_HPP

#include "pyts/class_info.hpp"
#include "pyts/cli.hpp"
#include "pyts/conformance.hpp"
#include "pyts/elaborate.hpp"
#include "pyts/error.hpp"
#include "pyts/frontend.hpp"
#include "pyts/json_io.hpp"
#include "pyts/members.hpp"
#include "pyts/mro.hpp"
#include "pyts/oracle.hpp"
#include "pyts/prelude.hpp"
#include "pyts/program.hpp"
#include "pyts/render.hpp"
#include "pyts/subtype.hpp"
#include "pyts/type_env.hpp"
#include "pyts/type_expr.hpp"
#include "pyts/type_ops.hpp"
#include "pyts/type_parser.hpp"

#endif
