#pragma once

#include "ilvelt/world_set.hpp"
#include "ilvelt/formula.hpp"
#include "ilvelt/parser.hpp"
#include "ilvelt/schema.hpp"
#include "ilvelt/semantics.hpp"
#include "ilvelt/frame.hpp"
#include "ilvelt/algebra.hpp"
#include "ilvelt/genframe.hpp"
#include "ilvelt/gen_conditions.hpp"
#include "ilvelt/structure_io.hpp"
#include "ilvelt/enumerate.hpp"
#include "ilvelt/correspond.hpp"
#include "ilvelt/search.hpp"
#include "ilvelt/hilbert.hpp"
