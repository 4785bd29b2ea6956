/** Browser bootstrap: wires the API client to the coordinated views.
 *
 * All layout math lives in the pure modules; this file only moves
 * strings into the DOM and events back out.
 */

import { ApiClient } from './api';
import { EditController } from './editmode';
import { renderSunburstSvg, renderThreadSvg } from './render';
import { conceptAtTime, selectConcept } from './selection';
import { peakIndicator } from './sparkline';
import type { ConceptMap, NavigationPayload } from './types';

interface AppConfig {
  apiBase: string;
  videoId: string;
  mediaUrl?: string;
}

export async function boot(config: AppConfig, root: HTMLElement): Promise<void> {
  const client = new ApiClient(config.apiBase);
  let map: ConceptMap = await client.getMap(config.videoId);
  let navigation: NavigationPayload = await client.getNavigation(config.videoId);

  root.innerHTML = `
    <div class="overview"></div>
    <div class="thread-view"></div>
    <div class="support-panel"></div>
    <video class="player" ${config.mediaUrl ? `src="${config.mediaUrl}"` : ''} controls></video>
  `;
  const overview = root.querySelector('.overview') as HTMLElement;
  const threadView = root.querySelector('.thread-view') as HTMLElement;
  const support = root.querySelector('.support-panel') as HTMLElement;
  const player = root.querySelector('.player') as HTMLVideoElement;

  const render = (m: ConceptMap) => {
    map = m;
    overview.innerHTML = renderSunburstSvg(navigation);
    threadView.innerHTML = renderThreadSvg(map, navigation);
  };
  render(map);

  const editor = new EditController(client, config.videoId, map, render);

  threadView.addEventListener('click', (event) => {
    const target = (event.target as Element).closest('[data-id]');
    if (!target) return;
    const state = selectConcept(map, target.getAttribute('data-id')!);
    if (state.seek_ms !== null) player.currentTime = state.seek_ms / 1000;
    support.textContent = state.support_panel
      ? `${state.support_panel.label} (${state.support_panel.spans.length} spans)`
      : '';
    for (const el of threadView.querySelectorAll('.glyph')) {
      const id = el.getAttribute('data-id')!;
      el.classList.toggle('selected', id === state.selected_id);
      el.classList.toggle('related', state.highlighted_concepts.includes(id));
    }
  });

  threadView.addEventListener('contextmenu', async (event) => {
    const target = (event.target as Element).closest('[data-id]');
    if (!target) return;
    event.preventDefault();
    const label = window.prompt('Rename concept to:');
    if (!label) return;
    const outcome = await editor.submit({
      op: 'rename_concept',
      payload: { id: target.getAttribute('data-id')!, label },
      author: 'ui',
    });
    if (outcome.status === 'conflict') {
      support.textContent = 'Edit conflicted with a newer revision; reloaded.';
    }
    navigation = await client.getNavigation(config.videoId);
    render(editor.map);
  });

  player.addEventListener('timeupdate', () => {
    const ms = player.currentTime * 1000;
    const current = conceptAtTime(map, ms);
    for (const el of threadView.querySelectorAll('.glyph')) {
      const id = el.getAttribute('data-id')!;
      el.classList.toggle('playing', id === current);
      const bins = navigation.sparklines[id];
      el.classList.toggle('near-peak', bins ? peakIndicator(bins, ms) : false);
    }
  });
}
