// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
// Request handler for the "Add Candidate" screen.
'use strict';

const { CandidateProfile, CandidateProfileDao } = require('../domain/dao/Candidate_Profile');

/**
 * Handles the `add-candidate` action, submitted by:
 *   - add ("Add candidate")
 */
async function addCandidate(request, connection) {
  const form = request.body || {};
  // business logic here: add-candidate
  return { screen: 'add-candidate', action: 'add-candidate', form };
}

module.exports = {
  'add-candidate': addCandidate,
};
