// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
// Request handler for the "Interview Result" screen.
'use strict';

const { CandIntResults, CandIntResultsDao } = require('../domain/dao/Cand_Int_Results');

/**
 * Handles the `save-result` action, submitted by:
 *   - save ("Save result")
 */
async function saveResult(request, connection) {
  const form = request.body || {};
  // business logic here: save-result
  return { screen: 'interview-result', action: 'save-result', form };
}

module.exports = {
  'save-result': saveResult,
};
