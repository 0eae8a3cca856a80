#pragma once

#include <iosfwd>
#include <string>

#include "secrec/assistant.hpp"
#include "secrec/session.hpp"

namespace secrec {

/// Line-oriented terminal dialogue over a session. Input lines:
///   <value> or <option number>   answer the current question
///   ? [question]                 ask the assistant (prompts if empty)
///   back                         retract the most recent answer
///   retract <property>           retract a specific answer
///   quit                         stop and return the session as is
/// When recommendations are shown, a pattern id or rank number selects.
/// End of input also stops gracefully.
Session run_wizard(const SessionEngine& engine, const Assistant& assistant, const std::string& kb_id, std::istream& in,
                   std::ostream& out);

}  // namespace secrec
