// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const views = [
  'views/index.html',
  'views/login.html',
  'views/welcome.html',
  'views/view-profile.html',
  'views/add-candidate.html',
  'views/interview-result.html',
  'views/registration.html',
];

const handlers = {
  'login': require('./handlers/login'),
  'add-candidate': require('./handlers/add-candidate'),
  'interview-result': require('./handlers/interview-result'),
  'registration': require('./handlers/registration'),
};

module.exports = { project: 'hr-portal', views, handlers };
