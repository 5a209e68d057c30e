// Copyright 2026 The pdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdlab/error.hpp"

namespace pdlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidPayoff: return "InvalidPayoff";
    case Errc::IllegalEvent: return "IllegalEvent";
    case Errc::DuplicateSubmission: return "DuplicateSubmission";
    case Errc::OddParticipantCount: return "OddParticipantCount";
    case Errc::TooManyRounds: return "TooManyRounds";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::TemplateError: return "TemplateError";
    case Errc::NoBracketedMessage: return "NoBracketedMessage";
    case Errc::NoDecisionFound: return "NoDecisionFound";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ParticipantDisconnected: return "ParticipantDisconnected";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::StageClosed: return "StageClosed";
    case Errc::SessionIncomplete: return "SessionIncomplete";
    case Errc::UnknownSession: return "UnknownSession";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::AllZeroDifferences: return "AllZeroDifferences";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::SeparationDetected: return "SeparationDetected";
    case Errc::RankDeficientDesign: return "RankDeficientDesign";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DatasetIncomplete: return "DatasetIncomplete";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pdlab
