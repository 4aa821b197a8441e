// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
// Request handler for the "Registration" screen.
'use strict';


/**
 * Handles the `register` action, submitted by:
 *   - register ("Register")
 */
async function register(request, connection) {
  const form = request.body || {};
  // business logic here: register
  return { screen: 'registration', action: 'register', form };
}

module.exports = {
  'register': register,
};
