// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
// Request handler for the "Login" screen.
'use strict';

const { EmpCredentials, EmpCredentialsDao } = require('../domain/dao/Emp_Credentials');

/**
 * Handles the `login` action, submitted by:
 *   - signin ("Sign in")
 */
async function login(request, connection) {
  const form = request.body || {};
  // business logic here: login
  return { screen: 'login', action: 'login', form };
}

module.exports = {
  'login': login,
};
