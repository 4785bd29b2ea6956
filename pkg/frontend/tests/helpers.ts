import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { ConceptMap, NavigationPayload } from '../src/types';

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T;
}

export const FIXTURE_VIDEOS = ['synth00', 'synth01', 'synth02'] as const;

export function loadMap(video: string): ConceptMap {
  return fixture<ConceptMap>(`${video}_map.json`);
}

export function loadNavigation(video: string): NavigationPayload {
  return fixture<NavigationPayload>(`${video}_navigation.json`);
}
