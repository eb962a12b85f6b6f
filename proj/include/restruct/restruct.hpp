#pragma once

#include "restruct/commands.hpp"
#include "restruct/errors.hpp"
#include "restruct/instance.hpp"
#include "restruct/money.hpp"
#include "restruct/multistage.hpp"
#include "restruct/oracle.hpp"
#include "restruct/restructure.hpp"
#include "restruct/scales.hpp"
#include "restruct/solvers.hpp"
